"""Randomized valid EaselSpecs over the fixture corpus, plus helpers for
the optional-slot switch property."""

from __future__ import annotations

import random

from easelworks.easelspec import EaselSpec, Reference, Structure

IMAGE_KEYS = ("forest", "lake", "dragon", "warrior")
STYLES = ("Realism", "Dreamlight", "Anime", "RetroAnime", "Animated", "3D", "PixelArt")
MAPS = ("pose", "depth", "scribble", "lineart")
KINDS = (
    ("draw", "flux"),
    ("draw", "sdxl"),
    ("draw", "wan22"),
    ("paint", "flux"),
    ("trace", "flux"),
    ("trace", "wan22"),
    ("modify", "flux"),
    ("animate", "wan22"),
)

WORDS = "forest lake dragon warrior cape night clearing storm ember glass moss canyon".split()


def _prompt(rng: random.Random) -> str:
    return " ".join(rng.choice(WORDS) for _ in range(rng.randint(2, 6)))


def random_spec(rng: random.Random, corpus, kind: str | None = None, backend: str | None = None) -> EaselSpec:
    if kind is None or backend is None:
        kind, backend = rng.choice(KINDS)
    img = lambda: corpus.a(rng.choice(IMAGE_KEYS))  # noqa: E731
    spec = EaselSpec(
        kind=kind,
        backend_model=backend,
        prompt=_prompt(rng),
        negative_prompt=_prompt(rng) if rng.random() < 0.5 else "",
        details=rng.random(),
        adherence=rng.random(),
        preserve=rng.random(),
        seed=rng.getrandbits(63),
    )
    if backend in ("flux", "sdxl") and rng.random() < 0.5:
        picks = rng.sample(STYLES, rng.randint(1, 3))
        spec.style_presets = [(name, rng.random()) for name in picks]
    if kind in ("draw", "paint"):
        if rng.random() < 0.5:
            spec.start_image = img()
    if kind == "paint":
        refs = []
        for _ in range(rng.randint(0, 3)):
            refs.append(
                Reference(
                    img(),
                    strength=rng.random(),
                    mask_asset_id=corpus.a("mask") if rng.random() < 0.4 else None,
                )
            )
        spec.references = refs
    if kind in ("paint", "trace") and backend == "flux":
        if rng.random() < 0.5:
            spec.structure = Structure(img(), rng.choice(MAPS), rng.random())
        if rng.random() < 0.4:
            spec.style_reference = img()
    if kind == "trace":
        spec.start_image = img()
        spec.trace_source_prompt = _prompt(rng)
        spec.trace_target_prompt = _prompt(rng)
        lo = round(rng.random() * 0.6, 3)
        hi = round(lo + rng.random() * (1.0 - lo), 3)
        spec.retrace_range = (lo, hi)
    if kind == "modify":
        spec.start_image = img()
        if rng.random() < 0.6:
            spec.prompt_pills = rng.sample(["low angle shot", "cool blue lighting", "film noir style"], rng.randint(1, 2))
        if rng.random() < 0.5:
            spec.aspect_ratio = rng.choice(("1:1", "16:9", "9:16", "4:3"))
    if kind == "animate":
        if rng.random() < 0.7:
            spec.first_frame = img()
        if rng.random() < 0.5:
            spec.last_frame = img()
        if rng.random() < 0.4:
            spec.prompt_pills = [rng.choice(["camera pans left", "slow push in", "orbit around subject"])]
    return spec


def optional_slots(spec: EaselSpec) -> list[str]:
    """Present optional slots that can be removed without invalidating the
    spec. style_reference is excluded: its presence selects the template."""
    slots = []
    if spec.negative_prompt:
        slots.append("negative_prompt")
    if spec.kind in ("draw", "paint") and spec.start_image:
        slots.append("start_image")
    for i, ref in enumerate(spec.references):
        slots.append(f"reference_{i}")
        if ref.mask_asset_id:
            slots.append(f"mask_{i}")
    if spec.structure is not None:
        slots.append("structure")
    if spec.first_frame:
        slots.append("first_frame")
    if spec.last_frame:
        slots.append("last_frame")
    return slots


def without_slot(spec: EaselSpec, slot: str) -> EaselSpec:
    clone = EaselSpec.from_dict(spec.to_dict())
    if slot == "negative_prompt":
        clone.negative_prompt = ""
    elif slot == "start_image":
        clone.start_image = None
    elif slot.startswith("reference_"):
        clone.references = [r for i, r in enumerate(clone.references) if i != int(slot.split("_")[1])]
    elif slot.startswith("mask_"):
        clone.references[int(slot.split("_")[1])].mask_asset_id = None
    elif slot == "structure":
        clone.structure = None
    elif slot == "first_frame":
        clone.first_frame = None
    elif slot == "last_frame":
        clone.last_frame = None
    else:
        raise ValueError(slot)
    return clone
