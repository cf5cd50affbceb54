"""Easel specifications: the declarative description of one generation.

An EaselSpec is what the canvas UI edits and what gets frozen into
provenance, so it is fully JSON-round-trippable. `validate` returns the
complete violation list instead of raising; the compiler raises
ValidationError with that list.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

EASEL_KINDS = ("draw", "paint", "trace", "modify", "animate")
BACKEND_MODELS = ("sdxl", "flux", "wan22")

# (kind, backend) pairs that have a workflow template
SUPPORTED_BACKENDS = {
    "draw": ("flux", "sdxl", "wan22"),
    "paint": ("flux",),
    "trace": ("flux", "wan22"),
    "modify": ("flux",),
    "animate": ("wan22",),
}

DEFAULT_BACKEND = {"draw": "flux", "paint": "flux", "trace": "flux", "modify": "flux", "animate": "wan22"}

# inference steps per (kind, backend)
DEFAULT_STEPS = {
    ("draw", "flux"): 8,
    ("paint", "flux"): 8,
    ("draw", "sdxl"): 20,
    ("draw", "wan22"): 20,
    ("trace", "flux"): 20,
    ("trace", "wan22"): 20,
    ("modify", "flux"): 20,
    ("animate", "wan22"): 20,
}

STYLE_PRESETS = ("Realism", "Dreamlight", "Anime", "RetroAnime", "Animated", "3D", "PixelArt")

MAP_KINDS = ("pose", "depth", "scribble", "lineart")

MAX_REFERENCES = 3

MAX_SEED = 2**64 - 1

# preset pill strings; the category drives which LoRA toggle engages
MODIFY_PILLS = {
    "low angle shot": "camera",
    "high angle shot": "camera",
    "close-up shot": "camera",
    "wide shot": "camera",
    "over-the-shoulder shot": "camera",
    "aerial view": "camera",
    "warm golden hour lighting": "relight",
    "cool blue lighting": "relight",
    "dramatic rim lighting": "relight",
    "soft diffused lighting": "relight",
    "hard direct sunlight": "relight",
    "moody low-key lighting": "relight",
    "cinematic color grade": "style",
    "film noir style": "style",
    "pastel color palette": "style",
    "high contrast look": "style",
    "consistent style and lighting across the image": "style",
    "show the scene from a different perspective view": "camera",
}

ANIMATE_PILLS = (
    "camera pans left",
    "camera pans right",
    "slow push in",
    "pull back reveal",
    "orbit around subject",
    "crane shot rising",
)

ASPECT_RATIOS = ("1:1", "4:3", "3:4", "16:9", "9:16", "21:9")


@dataclass
class Reference:
    asset_id: str
    strength: float = 1.0
    mask_asset_id: str | None = None

    def to_dict(self) -> dict:
        return {"asset_id": self.asset_id, "strength": self.strength, "mask_asset_id": self.mask_asset_id}

    @classmethod
    def from_dict(cls, d: dict) -> "Reference":
        return cls(d["asset_id"], d.get("strength", 1.0), d.get("mask_asset_id"))


@dataclass
class Structure:
    asset_id: str
    map_kind: str
    strength: float = 1.0

    def to_dict(self) -> dict:
        return {"asset_id": self.asset_id, "map_kind": self.map_kind, "strength": self.strength}

    @classmethod
    def from_dict(cls, d: dict) -> "Structure":
        return cls(d["asset_id"], d["map_kind"], d.get("strength", 1.0))


@dataclass
class EaselSpec:
    kind: str
    backend_model: str = ""
    prompt: str = ""
    negative_prompt: str = ""
    style_presets: list[tuple[str, float]] = field(default_factory=list)
    details: float = 0.0
    adherence: float = 0.5
    preserve: float = 0.0
    start_image: str | None = None
    references: list[Reference] = field(default_factory=list)
    style_reference: str | None = None
    structure: Structure | None = None
    trace_source_prompt: str = ""
    trace_target_prompt: str = ""
    retrace_range: tuple[float, float] = (0.0, 1.0)
    prompt_pills: list[str] = field(default_factory=list)
    aspect_ratio: str | None = None
    first_frame: str | None = None
    last_frame: str | None = None
    seed: int = 0
    steps: int | None = None

    def __post_init__(self):
        if not self.backend_model:
            self.backend_model = DEFAULT_BACKEND.get(self.kind, "flux")
        if self.steps is None:
            self.steps = DEFAULT_STEPS.get((self.kind, self.backend_model))

    def asset_refs(self) -> list[tuple[str, str]]:
        """All referenced assets with their provenance edge role."""
        refs: list[tuple[str, str]] = []
        if self.start_image:
            role = "input_image" if self.kind in ("trace", "modify") else "start_image"
            refs.append((self.start_image, role))
        for i, ref in enumerate(self.references):
            refs.append((ref.asset_id, f"reference_{i + 1}"))
            if ref.mask_asset_id:
                refs.append((ref.mask_asset_id, "mask"))
        if self.style_reference:
            refs.append((self.style_reference, "style"))
        if self.structure:
            refs.append((self.structure.asset_id, "structure"))
        if self.first_frame:
            refs.append((self.first_frame, "first_frame"))
        if self.last_frame:
            refs.append((self.last_frame, "last_frame"))
        return refs

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "backend_model": self.backend_model,
            "prompt": self.prompt,
            "negative_prompt": self.negative_prompt,
            "style_presets": [[n, s] for n, s in self.style_presets],
            "details": self.details,
            "adherence": self.adherence,
            "preserve": self.preserve,
            "start_image": self.start_image,
            "references": [r.to_dict() for r in self.references],
            "style_reference": self.style_reference,
            "structure": self.structure.to_dict() if self.structure else None,
            "trace_source_prompt": self.trace_source_prompt,
            "trace_target_prompt": self.trace_target_prompt,
            "retrace_range": list(self.retrace_range),
            "prompt_pills": list(self.prompt_pills),
            "aspect_ratio": self.aspect_ratio,
            "first_frame": self.first_frame,
            "last_frame": self.last_frame,
            "seed": self.seed,
            "steps": self.steps,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EaselSpec":
        return cls(
            kind=d["kind"],
            backend_model=d.get("backend_model", ""),
            prompt=d.get("prompt", ""),
            negative_prompt=d.get("negative_prompt", ""),
            style_presets=[tuple(p) for p in d.get("style_presets") or []],
            details=d.get("details", 0.0),
            adherence=d.get("adherence", 0.5),
            preserve=d.get("preserve", 0.0),
            start_image=d.get("start_image"),
            references=[Reference.from_dict(r) for r in d.get("references") or []],
            style_reference=d.get("style_reference"),
            structure=Structure.from_dict(d["structure"]) if d.get("structure") else None,
            trace_source_prompt=d.get("trace_source_prompt", ""),
            trace_target_prompt=d.get("trace_target_prompt", ""),
            retrace_range=tuple(d.get("retrace_range") or (0.0, 1.0)),
            prompt_pills=list(d.get("prompt_pills") or []),
            aspect_ratio=d.get("aspect_ratio"),
            first_frame=d.get("first_frame"),
            last_frame=d.get("last_frame"),
            seed=d.get("seed", 0),
            steps=d.get("steps"),
        )


def _slider_ok(v: Any) -> bool:
    return isinstance(v, (int, float)) and 0.0 <= float(v) <= 1.0


def validate(spec: EaselSpec) -> list[str]:
    """All invariant violations, empty when the spec is compilable."""
    v: list[str] = []
    if spec.kind not in EASEL_KINDS:
        v.append(f"unknown easel kind {spec.kind!r}")
        return v
    if spec.backend_model not in BACKEND_MODELS:
        v.append(f"unknown backend model {spec.backend_model!r}")
        return v
    if spec.backend_model not in SUPPORTED_BACKENDS[spec.kind]:
        v.append(f"{spec.kind} easel does not support backend {spec.backend_model}")

    for name in ("details", "adherence", "preserve"):
        if not _slider_ok(getattr(spec, name)):
            v.append(f"{name} must be in [0,1]")
    if len(spec.references) > MAX_REFERENCES:
        v.append(f"at most {MAX_REFERENCES} image references allowed, got {len(spec.references)}")
    for i, ref in enumerate(spec.references):
        if not _slider_ok(ref.strength):
            v.append(f"reference {i + 1} strength must be in [0,1]")
    seen = set()
    for name, strength in spec.style_presets:
        if name not in STYLE_PRESETS:
            v.append(f"unknown style preset {name!r}")
        elif name in seen:
            v.append(f"duplicate style preset {name!r}")
        seen.add(name)
        if not _slider_ok(strength):
            v.append(f"style preset {name!r} strength must be in [0,1]")
    if spec.style_presets and spec.backend_model == "wan22":
        v.append("style presets are not available on the wan22 backend")
    if spec.structure is not None:
        if spec.structure.map_kind not in MAP_KINDS:
            v.append(f"unknown structure map kind {spec.structure.map_kind!r}")
        if not _slider_ok(spec.structure.strength):
            v.append("structure strength must be in [0,1]")
    if not isinstance(spec.seed, int) or not (0 <= spec.seed <= MAX_SEED):
        v.append("seed must be an integer in [0, 2^64)")
    if spec.steps is None or not isinstance(spec.steps, int) or spec.steps <= 0:
        v.append("steps must be a positive integer")

    # per-kind slot rules
    if spec.references and spec.kind != "paint":
        v.append("image references are only available on the paint easel")
    if spec.style_reference and not (spec.kind in ("paint", "trace") and spec.backend_model == "flux"):
        v.append("style reference requires the paint or trace easel on the flux backend")
    if spec.structure and not (spec.kind in ("paint", "trace") and spec.backend_model == "flux"):
        v.append("structure image requires the paint or trace easel on the flux backend")
    if spec.start_image and spec.kind == "animate":
        v.append("animate takes first_frame/last_frame, not start_image")
    if spec.kind == "trace":
        if not spec.trace_source_prompt.strip():
            v.append("trace requires a source prompt")
        if not spec.trace_target_prompt.strip():
            v.append("trace requires a target prompt")
        if not spec.start_image:
            v.append("trace requires an input image")
        lo, hi = spec.retrace_range
        if not (_slider_ok(lo) and _slider_ok(hi) and lo <= hi):
            v.append("retrace range must satisfy 0 <= lo <= hi <= 1")
    else:
        if spec.trace_source_prompt or spec.trace_target_prompt:
            v.append("trace prompts are only valid on the trace easel")
    if spec.kind == "modify" and not spec.start_image:
        v.append("modify requires an input image")
    if spec.prompt_pills and spec.kind not in ("modify", "animate"):
        v.append("prompt pills are only available on modify and animate easels")
    if spec.aspect_ratio is not None:
        if spec.kind != "modify":
            v.append("aspect ratio is only available on the modify easel")
        elif spec.aspect_ratio not in ASPECT_RATIOS:
            v.append(f"unknown aspect ratio {spec.aspect_ratio!r}")
    if (spec.first_frame or spec.last_frame) and spec.kind != "animate":
        v.append("first/last frame are only available on the animate easel")
    return v
