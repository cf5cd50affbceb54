"""Compile easel specs and quick operations into workflow graphs.

All model plumbing lives here: creator-facing sliders map onto sampler
parameters, optional slots map onto switch integers and literal inputs
(never graph rewiring), and each (easel kind, backend, style-reference
presence) pair selects one packaged template. Compilation is a pure
function of the spec plus the referenced assets' immutable attributes
(blob hash, dims, control maps), which is what makes provenance's
recreate-and-recompile byte-exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable, Protocol

from . import easelspec as es
from .easelspec import EaselSpec, validate
from .errors import MissingPrompt, OutOfRange, UnknownKind, ValidationError, WrongAssetKind
from .mediainfo import load_image_rgba
from .palette import extract_palette
from .workflow import TemplateSet, WorkflowGraph

# dishonesty factor range for the detail slider
DETAILS_SCALE = -0.05

# structure guidance end-percentage per map kind
STRUCTURE_END = {"pose": 0.9, "depth": 0.7, "lineart": 0.4, "scribble": 0.5}

# adherence slider -> (lo, hi) guidance range per backend
GUIDANCE_RANGE = {"flux": (1.0, 5.0), "sdxl": (1.0, 12.0), "wan22": (1.0, 1.5)}

# placeholder filenames for inactive image slots
NONE_IMAGE = "__none__.png"
FULL_MASK = "__full__.png"

DEFAULT_SIZE = {"flux": (1024, 1024), "sdxl": (1024, 1024), "wan22": (1280, 720)}
ANIMATE_SIZE = (832, 480)
ANIMATE_LENGTH = 81  # 5 s at 16 fps
ANIMATE_FPS = 16

QUICK_OP_KINDS = (
    "quick_sketch",
    "remove_background",
    "extract_element",
    "palette",
    "stencil",
    "revision",
    "upscale",
    "blend",
    "extend",
    "view",
    "quick_animate",
    "sculpt",
)

VIEW_PILL = "show the scene from a different perspective view"
BLEND_PILL = "consistent style and lighting across the image"
EXTEND_PROMPT = "extend the scene beyond the frame"


def map_details(details: float) -> float:
    """Detail slider -> Lying Sigmas dishonesty factor, linear over [-0.05, 0]."""
    if not (0.0 <= details <= 1.0):
        raise OutOfRange(f"details must be in [0,1], got {details}")
    value = DETAILS_SCALE * details
    return value if value != 0 else 0.0


def map_preserve(preserve: float) -> float:
    """Preserve slider is the creator-facing complement of denoise."""
    if not (0.0 <= preserve <= 1.0):
        raise OutOfRange(f"preserve must be in [0,1], got {preserve}")
    return 1.0 - preserve


def map_structure_end(map_kind: str) -> float:
    try:
        return STRUCTURE_END[map_kind]
    except KeyError:
        raise UnknownKind(f"unknown structure map kind {map_kind!r}") from None


def map_adherence(adherence: float, backend: str) -> float:
    if not (0.0 <= adherence <= 1.0):
        raise OutOfRange(f"adherence must be in [0,1], got {adherence}")
    lo, hi = GUIDANCE_RANGE[backend]
    return lo + (hi - lo) * adherence


class AssetLike(Protocol):
    kind: str
    blob: str
    dims: tuple[int, int] | None
    control_maps: dict[str, str]
    caption: str | None


AssetResolver = Callable[[str], AssetLike | None]


def _blob_file(blob: str) -> str:
    return f"{blob}.png"


def _retrace_steps(retrace: tuple[float, float], steps: int) -> tuple[int, int]:
    lo, hi = retrace
    return math.floor(lo * steps), math.ceil(hi * steps)


def _aspect_dims(aspect: str) -> tuple[int, int]:
    """Fit the ratio into the flux pixel budget (1024^2), 16px aligned."""
    wr, hr = (int(p) for p in aspect.split(":"))
    area = 1024 * 1024
    w = math.sqrt(area * wr / hr)
    h = math.sqrt(area * hr / wr)
    return max(16, round(w / 16) * 16), max(16, round(h / 16) * 16)


class Compiler:
    def __init__(self, templates: TemplateSet | None = None):
        self.templates = templates or TemplateSet()

    # ------------------------------------------------------------- easels

    def template_name(self, spec: EaselSpec) -> str:
        name = f"{spec.kind}_{spec.backend_model}"
        if spec.style_reference:
            name += "_uso"
        return name

    def compile(self, spec: EaselSpec, resolve: AssetResolver) -> WorkflowGraph:
        violations = validate(spec)
        violations += self._check_assets(spec, resolve)
        if violations:
            raise ValidationError(violations)
        params = self._params(spec, resolve)
        return self.templates.instantiate(self.template_name(spec), params)

    def _check_assets(self, spec: EaselSpec, resolve: AssetResolver) -> list[str]:
        v = []
        for asset_id, role in spec.asset_refs():
            asset = resolve(asset_id)
            if asset is None:
                v.append(f"unknown asset {asset_id} in slot {role}")
            elif asset.kind != "image":
                v.append(f"asset {asset_id} in slot {role} must be an image, is {asset.kind}")
        if spec.structure is not None:
            asset = resolve(spec.structure.asset_id)
            if asset is not None and spec.structure.map_kind in es.MAP_KINDS:
                if spec.structure.map_kind not in asset.control_maps:
                    v.append(
                        f"asset {spec.structure.asset_id} has no precomputed {spec.structure.map_kind} map yet"
                    )
        return v

    def _params(self, spec: EaselSpec, resolve: AssetResolver) -> dict[str, Any]:
        backend = spec.backend_model
        params: dict[str, Any] = {
            "negative_prompt": spec.negative_prompt,
            "seed": spec.seed,
            "steps": spec.steps,
            "denoise": map_preserve(spec.preserve),
            "dishonesty": map_details(spec.details),
        }
        if backend == "flux":
            params["guidance"] = map_adherence(spec.adherence, "flux")
        else:
            params["cfg"] = map_adherence(spec.adherence, backend)

        prompt = spec.prompt
        if spec.kind in ("modify", "animate") and spec.prompt_pills:
            joined = ", ".join(spec.prompt_pills)
            prompt = f"{prompt}, {joined}" if prompt else joined
        params["prompt"] = prompt

        active_styles = dict(spec.style_presets)
        for name, slug in (
            ("Realism", "realism"),
            ("Dreamlight", "dreamlight"),
            ("Anime", "anime"),
            ("RetroAnime", "retro_anime"),
            ("Animated", "animated"),
            ("3D", "three_d"),
            ("PixelArt", "pixel_art"),
        ):
            params[f"style_{slug}"] = float(active_styles.get(name, 0.0))

        start = resolve(spec.start_image) if spec.start_image else None
        if spec.kind in ("draw", "paint"):
            params["width"], params["height"] = DEFAULT_SIZE[backend]
            params["start_image"] = _blob_file(start.blob) if start else NONE_IMAGE
            params["start_select"] = 2 if start else 1
            # with no start image the full schedule runs regardless of the slider
            if start is None:
                params["denoise"] = 1.0

        if spec.kind == "paint":
            for i in range(3):
                ref = spec.references[i] if i < len(spec.references) else None
                ref_asset = resolve(ref.asset_id) if ref else None
                mask_asset = resolve(ref.mask_asset_id) if ref and ref.mask_asset_id else None
                params[f"ref{i + 1}_image"] = _blob_file(ref_asset.blob) if ref_asset else NONE_IMAGE
                params[f"ref{i + 1}_strength"] = float(ref.strength) if ref else 0.0
                params[f"ref{i + 1}_mask"] = _blob_file(mask_asset.blob) if mask_asset else FULL_MASK

        if spec.kind in ("paint", "trace") and backend == "flux":
            structure = spec.structure
            struct_asset = resolve(structure.asset_id) if structure else None
            if structure and struct_asset is not None:
                params["structure_image"] = _blob_file(struct_asset.control_maps[structure.map_kind])
                params["structure_type"] = structure.map_kind
                params["structure_strength"] = float(structure.strength)
                params["structure_end"] = map_structure_end(structure.map_kind)
                params["structure_select"] = 2
            else:
                params["structure_image"] = NONE_IMAGE
                params["structure_type"] = "depth"
                params["structure_strength"] = 0.0
                params["structure_end"] = map_structure_end("depth")
                params["structure_select"] = 1
            if spec.style_reference:
                style_asset = resolve(spec.style_reference)
                params["style_ref_image"] = _blob_file(style_asset.blob)

        if spec.kind == "trace":
            params["source_prompt"] = spec.trace_source_prompt
            params["target_prompt"] = spec.trace_target_prompt
            params["input_image"] = _blob_file(start.blob)
            params["skip_steps"], params["stop_at"] = _retrace_steps(spec.retrace_range, spec.steps)

        if spec.kind == "modify":
            params["input_image"] = _blob_file(start.blob)
            if spec.aspect_ratio:
                params["aspect_ratio"] = spec.aspect_ratio
                params["width"], params["height"] = _aspect_dims(spec.aspect_ratio)
            else:
                params["aspect_ratio"] = "match_input"
                dims = start.dims or DEFAULT_SIZE["flux"]
                params["width"], params["height"] = int(dims[0]), int(dims[1])
            categories = {es.MODIFY_PILLS.get(pill) for pill in spec.prompt_pills}
            for cat in ("camera", "relight", "style"):
                params[f"lora_{cat}"] = 1.0 if cat in categories else 0.0

        if spec.kind == "animate":
            params["width"], params["height"] = ANIMATE_SIZE
            params["length"] = ANIMATE_LENGTH
            params["fps"] = ANIMATE_FPS
            params["split_step"] = spec.steps // 2
            first = resolve(spec.first_frame) if spec.first_frame else None
            last = resolve(spec.last_frame) if spec.last_frame else None
            params["first_image"] = _blob_file(first.blob) if first else NONE_IMAGE
            params["first_select"] = 2 if first else 1
            params["last_image"] = _blob_file(last.blob) if last else NONE_IMAGE
            params["last_select"] = 2 if last else 1

        return params

    # ---------------------------------------------------------- quick ops

    def compile_quick_op(
        self,
        op_kind: str,
        asset: AssetLike,
        prompt: str | None,
        seed: int,
        resolve: AssetResolver,
        blob_loader: Callable[[str], bytes] | None = None,
    ) -> "QuickOpPlan":
        """Plan a one-click operation: either a local result or a graph.

        Several ops are pared-down easels (quick_sketch -> draw, revision /
        view / blend -> modify, quick_animate -> animate); the rest use
        their own small templates. Palette always computes locally; stencil
        is local when the four control maps are already precomputed.
        """
        if op_kind not in QUICK_OP_KINDS:
            raise UnknownKind(f"unknown quick op {op_kind!r}")
        descriptor = {
            "type": "quick_op",
            "kind": op_kind,
            "asset_id": getattr(asset, "asset_id", None),
            "prompt": prompt or "",
            "seed": seed,
        }

        if op_kind == "quick_sketch":
            if asset.kind != "text":
                raise WrongAssetKind("quick sketch runs on text assets")
            spec = EaselSpec(kind="draw", backend_model="flux", prompt=asset.caption or "", seed=seed)
            return self._easel_plan(descriptor, spec, resolve)

        if op_kind == "quick_animate":
            if asset.kind != "image":
                raise WrongAssetKind("quick animate runs on image assets")
            spec = EaselSpec(kind="animate", backend_model="wan22", prompt="", first_frame=asset.asset_id, seed=seed)
            return self._easel_plan(descriptor, spec, resolve)

        if op_kind in ("revision", "view", "blend"):
            if asset.kind != "image":
                raise WrongAssetKind(f"{op_kind} runs on image assets")
            if op_kind == "revision" and not (prompt or "").strip():
                raise MissingPrompt("revision needs an instruction prompt")
            pills = {"revision": [], "view": [VIEW_PILL], "blend": [BLEND_PILL]}[op_kind]
            spec = EaselSpec(
                kind="modify",
                backend_model="flux",
                prompt=prompt or "",
                prompt_pills=pills,
                start_image=asset.asset_id,
                seed=seed,
            )
            return self._easel_plan(descriptor, spec, resolve)

        if op_kind == "palette":
            if asset.kind != "image":
                raise WrongAssetKind("palette runs on image assets")
            if blob_loader is None:
                raise WrongAssetKind("palette needs blob access")
            colors = extract_palette(load_image_rgba(blob_loader(asset.blob)), k=6)
            return QuickOpPlan(op_kind, descriptor, local={"colors": colors})

        if asset.kind != "image":
            raise WrongAssetKind(f"{op_kind} runs on image assets")

        if op_kind == "stencil":
            if all(k in asset.control_maps for k in ("pose", "depth", "scribble", "lineart")):
                return QuickOpPlan(op_kind, descriptor, local={"maps": dict(asset.control_maps)})
            graph = self.templates.instantiate("qop_stencil", {"input_image": _blob_file(asset.blob)})
            return QuickOpPlan(op_kind, descriptor, graph=graph, output_kinds=["image"] * 4)

        if op_kind == "extract_element":
            if not (prompt or "").strip():
                raise MissingPrompt("extract element needs a target description")
            graph = self.templates.instantiate(
                "qop_extract_element", {"input_image": _blob_file(asset.blob), "element_prompt": prompt}
            )
            return QuickOpPlan(op_kind, descriptor, graph=graph, output_kinds=["image"])

        if op_kind == "remove_background":
            graph = self.templates.instantiate("qop_remove_background", {"input_image": _blob_file(asset.blob)})
            return QuickOpPlan(op_kind, descriptor, graph=graph, output_kinds=["image"])

        if op_kind == "upscale":
            graph = self.templates.instantiate(
                "qop_upscale", {"input_image": _blob_file(asset.blob), "scale_by": 0.5}
            )
            return QuickOpPlan(op_kind, descriptor, graph=graph, output_kinds=["image"])

        if op_kind == "extend":
            graph = self.templates.instantiate(
                "qop_extend",
                {
                    "input_image": _blob_file(asset.blob),
                    "pad": 128,
                    "prompt": (prompt or "").strip() or EXTEND_PROMPT,
                    "steps": 8,
                    "seed": seed,
                    "dishonesty": 0.0,
                },
            )
            return QuickOpPlan(op_kind, descriptor, graph=graph, output_kinds=["image"])

        # sculpt
        graph = self.templates.instantiate("qop_sculpt", {"input_image": _blob_file(asset.blob), "seed": seed})
        return QuickOpPlan(op_kind, descriptor, graph=graph, output_kinds=["model3d"])

    def _easel_plan(self, descriptor: dict, spec: EaselSpec, resolve: AssetResolver) -> "QuickOpPlan":
        graph = self.compile(spec, resolve)
        descriptor = dict(descriptor)
        descriptor["spec"] = spec.to_dict()
        kinds = ["video"] if spec.kind == "animate" else ["image"]
        return QuickOpPlan(descriptor["kind"], descriptor, graph=graph, output_kinds=kinds)

    # ------------------------------------------------------------ helpers

    def compile_metadata_job(self, asset: AssetLike) -> WorkflowGraph:
        if asset.kind != "image":
            raise WrongAssetKind("metadata preprocessing runs on image assets")
        return self.templates.instantiate("metadata_preprocess", {"input_image": _blob_file(asset.blob)})

    def compile_params(
        self, params: dict, resolve: AssetResolver, blob_loader: Callable[[str], bytes] | None = None
    ) -> WorkflowGraph:
        """Recompile a frozen provenance snapshot (easel or quick-op)."""
        kind = params.get("type")
        if kind == "easel" or (kind == "quick_op" and params.get("spec")):
            return self.compile(EaselSpec.from_dict(params.get("spec") or params), resolve)
        if kind == "quick_op":
            asset = resolve(params["asset_id"])
            if asset is None:
                raise ValidationError([f"unknown asset {params['asset_id']} in quick-op snapshot"])
            plan = self.compile_quick_op(
                params["kind"], asset, params.get("prompt") or None, seed=params.get("seed", 0),
                resolve=resolve, blob_loader=blob_loader,
            )
            if plan.graph is None:
                raise ValidationError([f"quick op {params['kind']} computes locally; nothing to recompile"])
            return plan.graph
        if kind in ("collage", "sketch"):
            raise ValidationError([f"{kind} runs are raster operations; nothing to recompile"])
        return self.compile(EaselSpec.from_dict(params), resolve)


@dataclass
class QuickOpPlan:
    op_kind: str
    params: dict  # provenance descriptor, including the derived spec if any
    local: dict | None = None
    graph: WorkflowGraph | None = None
    output_kinds: list[str] | None = None
