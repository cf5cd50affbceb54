"""Regenerate the packaged workflow template JSON files.

Templates are authored here as Python dicts because the flux/wan easels
share large sub-stacks; the checked-in JSON under src/easelworks/templates
is the artifact of record (golden tests lock its bytes). Run from the repo
root:  python tools/gen_templates.py
"""

import json
from pathlib import Path

OUT_DIR = Path(__file__).resolve().parent.parent / "src" / "easelworks" / "templates"

STYLE_LORAS = [
    ("realism", "style-realism.safetensors"),
    ("dreamlight", "style-dreamlight.safetensors"),
    ("anime", "style-anime.safetensors"),
    ("retro_anime", "style-retro-anime.safetensors"),
    ("animated", "style-animated.safetensors"),
    ("three_d", "style-3d.safetensors"),
    ("pixel_art", "style-pixel-art.safetensors"),
]


def P(name):
    return {"$": name}


def E(nid, idx=0):
    return [nid, idx]


def node(class_type, **inputs):
    return {"class_type": class_type, "inputs": inputs}


def flux_loaders(nodes, unet="flux1-dev.safetensors", styles=True, turbo=True):
    nodes["unet"] = node("UNETLoader", unet_name=unet, weight_dtype="fp8_e4m3fn")
    nodes["clip"] = node(
        "DualCLIPLoader",
        clip_name1="t5xxl_fp8_e4m3fn.safetensors",
        clip_name2="clip_l.safetensors",
        type="flux",
    )
    nodes["vae"] = node("VAELoader", vae_name="ae.safetensors")
    prev = "unet"
    if turbo:
        nodes["lora_turbo"] = node(
            "LoraLoaderModelOnly", model=E(prev), lora_name="flux-turbo-alpha.safetensors", strength_model=1.0
        )
        prev = "lora_turbo"
    if styles:
        for slug, fname in STYLE_LORAS:
            nodes[f"lora_{slug}"] = node(
                "LoraLoaderModelOnly", model=E(prev), lora_name=fname, strength_model=P(f"style_{slug}")
            )
            prev = f"lora_{slug}"
    return prev


def wan_loaders(nodes, unet, lightning):
    nodes["unet"] = node("UNETLoader", unet_name=unet, weight_dtype="default")
    nodes["clip"] = node("CLIPLoader", clip_name="umt5_xxl_fp8_e4m3fn.safetensors", type="wan")
    nodes["vae"] = node("VAELoader", vae_name="wan_2.1_vae.safetensors")
    nodes["lora_lightning"] = node(
        "LoraLoaderModelOnly", model=E("unet"), lora_name=lightning, strength_model=1.0
    )
    return "lora_lightning"


def sampler_stack(nodes, model, guider, latent, sampler_src=None, denoise=None):
    if sampler_src is None:
        nodes["ksel"] = node("KSamplerSelect", sampler_name="euler")
        sampler_src = "ksel"
    nodes["detail"] = node(
        "LyingSigmaSampler",
        sampler=E(sampler_src),
        dishonesty_factor=P("dishonesty"),
        start_percent=0.1,
        end_percent=0.9,
    )
    nodes["sched"] = node(
        "BasicScheduler", model=E(model), scheduler="simple", steps=P("steps"), denoise=denoise if denoise is not None else P("denoise")
    )
    nodes["noise"] = node("RandomNoise", noise_seed=P("seed"))
    nodes["sampler"] = node(
        "SamplerCustomAdvanced",
        noise=E("noise"),
        guider=E(guider),
        sampler=E("detail"),
        sigmas=E("sched"),
        latent_image=E(latent),
    )


def start_image_switch(nodes, empty_node):
    nodes["start_load"] = node("LoadImage", image=P("start_image"))
    nodes["start_encode"] = node("VAEEncode", pixels=E("start_load"), vae=E("vae"))
    nodes["latent_switch"] = node(
        "ImpactSwitch", select=P("start_select"), input1=E(empty_node), input2=E("start_encode")
    )
    return "latent_switch"


def references_chain(nodes, cond_in):
    nodes["clip_vision"] = node("CLIPVisionLoader", clip_name="sigclip_vision_patch14_384.safetensors")
    nodes["style_model"] = node("StyleModelLoader", style_model_name="flux1-redux-dev.safetensors")
    prev = cond_in
    for i in (1, 2, 3):
        nodes[f"ref{i}_load"] = node("LoadImage", image=P(f"ref{i}_image"))
        nodes[f"ref{i}_mask_load"] = node("LoadImage", image=P(f"ref{i}_mask"))
        nodes[f"ref{i}_mask"] = node("ImageToMask", image=E(f"ref{i}_mask_load"), channel="red")
        nodes[f"ref{i}_encode"] = node(
            "CLIPVisionEncode", clip_vision=E("clip_vision"), image=E(f"ref{i}_load"), crop="center"
        )
        nodes[f"ref{i}_apply"] = node(
            "ReduxAdvanced",
            conditioning=E(prev),
            style_model=E("style_model"),
            clip_vision_output=E(f"ref{i}_encode"),
            strength=P(f"ref{i}_strength"),
            mask=E(f"ref{i}_mask"),
        )
        prev = f"ref{i}_apply"
    return prev


def structure_switch(nodes, pos_in, neg_in):
    nodes["structure_load"] = node("LoadImage", image=P("structure_image"))
    nodes["controlnet"] = node("ControlNetLoader", control_net_name="flux-union-controlnet-pro.safetensors")
    nodes["controlnet_type"] = node("SetUnionControlNetType", control_net=E("controlnet"), type=P("structure_type"))
    nodes["structure_apply"] = node(
        "ControlNetApplyAdvanced",
        positive=E(pos_in),
        negative=E(neg_in),
        control_net=E("controlnet_type"),
        image=E("structure_load"),
        strength=P("structure_strength"),
        start_percent=0.0,
        end_percent=P("structure_end"),
        vae=E("vae"),
    )
    nodes["pos_switch"] = node(
        "ImpactSwitch", select=P("structure_select"), input1=E(pos_in), input2=E("structure_apply", 0)
    )
    nodes["neg_switch"] = node(
        "ImpactSwitch", select=P("structure_select"), input1=E(neg_in), input2=E("structure_apply", 1)
    )
    return "pos_switch", "neg_switch"


def uso_branch(nodes, model_in):
    nodes["uso_patch"] = node("ModelPatchLoader", name="uso-flux1-projector.safetensors")
    nodes["uso_load"] = node("LoadImage", image=P("style_ref_image"))
    nodes["uso_encode"] = node("CLIPVisionEncode", clip_vision=E("clip_vision"), image=E("uso_load"), crop="center")
    nodes["uso_apply"] = node(
        "USOStyleReference", model=E(model_in), model_patch=E("uso_patch"), clip_vision_output=E("uso_encode")
    )
    return "uso_apply"


def draw_flux():
    nodes = {}
    model = flux_loaders(nodes)
    nodes["pos"] = node("CLIPTextEncode", clip=E("clip"), text=P("prompt"))
    nodes["neg"] = node("CLIPTextEncode", clip=E("clip"), text=P("negative_prompt"))
    nodes["guidance"] = node("FluxGuidance", conditioning=E("pos"), guidance=P("guidance"))
    nodes["latent_empty"] = node("EmptySD3LatentImage", width=P("width"), height=P("height"), batch_size=1)
    latent = start_image_switch(nodes, "latent_empty")
    nodes["guider"] = node(
        "NAGCFGGuider", model=E(model), positive=E("guidance"), negative=E("neg"), nag_scale=9.0, cfg=1.0
    )
    sampler_stack(nodes, model, "guider", latent)
    nodes["decode"] = node("VAEDecode", samples=E("sampler"), vae=E("vae"))
    nodes["save"] = node("SaveImage", images=E("decode"), filename_prefix="easel/draw")
    return {"nodes": nodes, "outputs": ["save"]}


def paint_flux(uso=False):
    nodes = {}
    model = flux_loaders(nodes)
    nodes["pos"] = node("CLIPTextEncode", clip=E("clip"), text=P("prompt"))
    nodes["neg"] = node("CLIPTextEncode", clip=E("clip"), text=P("negative_prompt"))
    cond = references_chain(nodes, "pos")
    nodes["guidance"] = node("FluxGuidance", conditioning=E(cond), guidance=P("guidance"))
    pos_out, neg_out = structure_switch(nodes, "guidance", "neg")
    nodes["latent_empty"] = node("EmptySD3LatentImage", width=P("width"), height=P("height"), batch_size=1)
    latent = start_image_switch(nodes, "latent_empty")
    if uso:
        model = uso_branch(nodes, model)
    nodes["guider"] = node(
        "NAGCFGGuider", model=E(model), positive=E(pos_out), negative=E(neg_out), nag_scale=9.0, cfg=1.0
    )
    sampler_stack(nodes, model, "guider", latent)
    nodes["decode"] = node("VAEDecode", samples=E("sampler"), vae=E("vae"))
    nodes["save"] = node("SaveImage", images=E("decode"), filename_prefix="easel/paint")
    return {"nodes": nodes, "outputs": ["save"]}


def trace_flux(uso=False):
    nodes = {}
    model = flux_loaders(nodes, turbo=False)
    nodes["src"] = node("CLIPTextEncode", clip=E("clip"), text=P("source_prompt"))
    nodes["pos"] = node("CLIPTextEncode", clip=E("clip"), text=P("target_prompt"))
    nodes["neg"] = node("CLIPTextEncode", clip=E("clip"), text=P("negative_prompt"))
    nodes["guidance"] = node("FluxGuidance", conditioning=E("pos"), guidance=P("guidance"))
    nodes["src_guidance"] = node("FluxGuidance", conditioning=E("src"), guidance=P("guidance"))
    pos_out, neg_out = structure_switch(nodes, "guidance", "neg")
    if uso:
        nodes["clip_vision"] = node("CLIPVisionLoader", clip_name="sigclip_vision_patch14_384.safetensors")
        model = uso_branch(nodes, model)
    nodes["input_load"] = node("LoadImage", image=P("input_image"))
    nodes["input_encode"] = node("VAEEncode", pixels=E("input_load"), vae=E("vae"))
    nodes["guider"] = node(
        "NAGCFGGuider", model=E(model), positive=E(pos_out), negative=E(neg_out), nag_scale=9.0, cfg=1.0
    )
    nodes["flowedit_guider"] = node(
        "FlowEditGuider", guider=E("guider"), source_conditioning=E("src_guidance")
    )
    nodes["ksel_base"] = node("KSamplerSelect", sampler_name="euler")
    nodes["flowedit_sampler"] = node(
        "FlowEditSampler", sampler=E("ksel_base"), skip_steps=P("skip_steps"), stop_at=P("stop_at")
    )
    sampler_stack(nodes, model, "flowedit_guider", "input_encode", sampler_src="flowedit_sampler")
    nodes["decode"] = node("VAEDecode", samples=E("sampler"), vae=E("vae"))
    nodes["save"] = node("SaveImage", images=E("decode"), filename_prefix="easel/trace")
    return {"nodes": nodes, "outputs": ["save"]}


def trace_wan22():
    nodes = {}
    model = wan_loaders(nodes, "wan2.2_t2v_low_noise_14B.safetensors", "wan22_lightning_low.safetensors")
    nodes["src"] = node("CLIPTextEncode", clip=E("clip"), text=P("source_prompt"))
    nodes["pos"] = node("CLIPTextEncode", clip=E("clip"), text=P("target_prompt"))
    nodes["neg"] = node("CLIPTextEncode", clip=E("clip"), text=P("negative_prompt"))
    nodes["input_load"] = node("LoadImage", image=P("input_image"))
    nodes["input_encode"] = node("VAEEncode", pixels=E("input_load"), vae=E("vae"))
    nodes["guider"] = node(
        "NAGCFGGuider", model=E(model), positive=E("pos"), negative=E("neg"), nag_scale=11.0, cfg=P("cfg")
    )
    nodes["flowedit_guider"] = node("FlowEditGuider", guider=E("guider"), source_conditioning=E("src"))
    nodes["ksel_base"] = node("KSamplerSelect", sampler_name="euler")
    nodes["flowedit_sampler"] = node(
        "FlowEditSampler", sampler=E("ksel_base"), skip_steps=P("skip_steps"), stop_at=P("stop_at")
    )
    sampler_stack(nodes, model, "flowedit_guider", "input_encode", sampler_src="flowedit_sampler")
    nodes["decode"] = node("VAEDecode", samples=E("sampler"), vae=E("vae"))
    nodes["save"] = node("SaveImage", images=E("decode"), filename_prefix="easel/trace")
    return {"nodes": nodes, "outputs": ["save"]}


def draw_wan22():
    nodes = {}
    model = wan_loaders(nodes, "wan2.2_t2v_low_noise_14B.safetensors", "wan22_lightning_low.safetensors")
    nodes["pos"] = node("CLIPTextEncode", clip=E("clip"), text=P("prompt"))
    nodes["neg"] = node("CLIPTextEncode", clip=E("clip"), text=P("negative_prompt"))
    nodes["latent_empty"] = node(
        "EmptyWanLatentVideo", width=P("width"), height=P("height"), length=1, batch_size=1
    )
    latent = start_image_switch(nodes, "latent_empty")
    nodes["guider"] = node(
        "NAGCFGGuider", model=E(model), positive=E("pos"), negative=E("neg"), nag_scale=11.0, cfg=P("cfg")
    )
    sampler_stack(nodes, model, "guider", latent)
    nodes["decode"] = node("VAEDecode", samples=E("sampler"), vae=E("vae"))
    nodes["save"] = node("SaveImage", images=E("decode"), filename_prefix="easel/draw")
    return {"nodes": nodes, "outputs": ["save"]}


def draw_sdxl():
    nodes = {}
    nodes["ckpt"] = node("CheckpointLoaderSimple", ckpt_name="sd_xl_base_1.0.safetensors")
    prev, prev_clip = ("ckpt", 0), ("ckpt", 1)
    for slug, fname in STYLE_LORAS:
        nodes[f"lora_{slug}"] = node(
            "LoraLoader",
            model=list(prev),
            clip=list(prev_clip),
            lora_name=fname,
            strength_model=P(f"style_{slug}"),
            strength_clip=P(f"style_{slug}"),
        )
        prev, prev_clip = (f"lora_{slug}", 0), (f"lora_{slug}", 1)
    nodes["pos"] = node("CLIPTextEncode", clip=list(prev_clip), text=P("prompt"))
    nodes["neg"] = node("CLIPTextEncode", clip=list(prev_clip), text=P("negative_prompt"))
    nodes["guider"] = node("CFGGuider", model=list(prev), positive=E("pos"), negative=E("neg"), cfg=P("cfg"))
    nodes["latent_empty"] = node("EmptyLatentImage", width=P("width"), height=P("height"), batch_size=1)
    nodes["start_load"] = node("LoadImage", image=P("start_image"))
    nodes["start_encode"] = node("VAEEncode", pixels=E("start_load"), vae=E("ckpt", 2))
    nodes["latent_switch"] = node(
        "ImpactSwitch", select=P("start_select"), input1=E("latent_empty"), input2=E("start_encode")
    )
    nodes["ksel"] = node("KSamplerSelect", sampler_name="euler")
    nodes["detail"] = node(
        "LyingSigmaSampler", sampler=E("ksel"), dishonesty_factor=P("dishonesty"), start_percent=0.1, end_percent=0.9
    )
    nodes["sched"] = node("BasicScheduler", model=list(prev), scheduler="simple", steps=P("steps"), denoise=P("denoise"))
    nodes["noise"] = node("RandomNoise", noise_seed=P("seed"))
    nodes["sampler"] = node(
        "SamplerCustomAdvanced",
        noise=E("noise"),
        guider=E("guider"),
        sampler=E("detail"),
        sigmas=E("sched"),
        latent_image=E("latent_switch"),
    )
    nodes["decode"] = node("VAEDecode", samples=E("sampler"), vae=E("ckpt", 2))
    nodes["save"] = node("SaveImage", images=E("decode"), filename_prefix="easel/draw")
    return {"nodes": nodes, "outputs": ["save"]}


def modify_flux():
    nodes = {}
    nodes["unet"] = node("UNETLoader", unet_name="flux1-kontext-dev.safetensors", weight_dtype="fp8_e4m3fn")
    nodes["clip"] = node(
        "DualCLIPLoader",
        clip_name1="t5xxl_fp8_e4m3fn.safetensors",
        clip_name2="clip_l.safetensors",
        type="flux",
    )
    nodes["vae"] = node("VAELoader", vae_name="ae.safetensors")
    nodes["lora_camera"] = node(
        "LoraLoaderModelOnly", model=E("unet"), lora_name="kontext-camera-angles.safetensors", strength_model=P("lora_camera")
    )
    nodes["lora_relight"] = node(
        "LoraLoaderModelOnly", model=E("lora_camera"), lora_name="kontext-relight.safetensors", strength_model=P("lora_relight")
    )
    nodes["lora_style"] = node(
        "LoraLoaderModelOnly", model=E("lora_relight"), lora_name="kontext-styles.safetensors", strength_model=P("lora_style")
    )
    nodes["input_load"] = node("LoadImage", image=P("input_image"))
    nodes["scale"] = node(
        "FluxKontextImageScale", image=E("input_load"), aspect_ratio=P("aspect_ratio"), width=P("width"), height=P("height")
    )
    nodes["input_encode"] = node("VAEEncode", pixels=E("scale"), vae=E("vae"))
    nodes["pos"] = node("CLIPTextEncode", clip=E("clip"), text=P("prompt"))
    nodes["neg"] = node("CLIPTextEncode", clip=E("clip"), text=P("negative_prompt"))
    nodes["ref_latent"] = node("ReferenceLatent", conditioning=E("pos"), latent=E("input_encode"))
    nodes["guidance"] = node("FluxGuidance", conditioning=E("ref_latent"), guidance=P("guidance"))
    nodes["guider"] = node(
        "NAGCFGGuider", model=E("lora_style"), positive=E("guidance"), negative=E("neg"), nag_scale=9.0, cfg=1.0
    )
    sampler_stack(nodes, "lora_style", "guider", "input_encode")
    nodes["decode"] = node("VAEDecode", samples=E("sampler"), vae=E("vae"))
    nodes["save"] = node("SaveImage", images=E("decode"), filename_prefix="easel/modify")
    return {"nodes": nodes, "outputs": ["save"]}


def animate_wan22():
    nodes = {}
    nodes["unet_high"] = node("UNETLoader", unet_name="wan2.2_i2v_high_noise_14B.safetensors", weight_dtype="default")
    nodes["unet_low"] = node("UNETLoader", unet_name="wan2.2_i2v_low_noise_14B.safetensors", weight_dtype="default")
    nodes["clip"] = node("CLIPLoader", clip_name="umt5_xxl_fp8_e4m3fn.safetensors", type="wan")
    nodes["vae"] = node("VAELoader", vae_name="wan_2.1_vae.safetensors")
    nodes["lora_high"] = node(
        "LoraLoaderModelOnly", model=E("unet_high"), lora_name="wan22_lightning_high.safetensors", strength_model=1.0
    )
    nodes["lora_low"] = node(
        "LoraLoaderModelOnly", model=E("unet_low"), lora_name="wan22_lightning_low.safetensors", strength_model=1.0
    )
    nodes["pos"] = node("CLIPTextEncode", clip=E("clip"), text=P("prompt"))
    nodes["neg"] = node("CLIPTextEncode", clip=E("clip"), text=P("negative_prompt"))
    nodes["frame_blank"] = node("EmptyImage", width=P("width"), height=P("height"), batch_size=1, color=0)
    nodes["first_load"] = node("LoadImage", image=P("first_image"))
    nodes["last_load"] = node("LoadImage", image=P("last_image"))
    nodes["first_switch"] = node(
        "ImpactSwitch", select=P("first_select"), input1=E("frame_blank"), input2=E("first_load")
    )
    nodes["last_switch"] = node(
        "ImpactSwitch", select=P("last_select"), input1=E("frame_blank"), input2=E("last_load")
    )
    nodes["flf"] = node(
        "WanFirstLastFrameToVideo",
        positive=E("pos"),
        negative=E("neg"),
        vae=E("vae"),
        width=P("width"),
        height=P("height"),
        length=P("length"),
        batch_size=1,
        start_image=E("first_switch"),
        end_image=E("last_switch"),
    )
    nodes["guider_high"] = node(
        "NAGCFGGuider", model=E("lora_high"), positive=E("flf", 0), negative=E("flf", 1), nag_scale=11.0, cfg=P("cfg")
    )
    nodes["guider_low"] = node(
        "NAGCFGGuider", model=E("lora_low"), positive=E("flf", 0), negative=E("flf", 1), nag_scale=11.0, cfg=P("cfg")
    )
    nodes["ksel"] = node("KSamplerSelect", sampler_name="euler")
    nodes["detail"] = node(
        "LyingSigmaSampler", sampler=E("ksel"), dishonesty_factor=P("dishonesty"), start_percent=0.1, end_percent=0.9
    )
    nodes["sched"] = node("BasicScheduler", model=E("lora_high"), scheduler="simple", steps=P("steps"), denoise=1.0)
    nodes["split"] = node("SplitSigmas", sigmas=E("sched"), step=P("split_step"))
    nodes["noise"] = node("RandomNoise", noise_seed=P("seed"))
    nodes["sampler_high"] = node(
        "SamplerCustomAdvanced",
        noise=E("noise"),
        guider=E("guider_high"),
        sampler=E("detail"),
        sigmas=E("split", 0),
        latent_image=E("flf", 2),
    )
    nodes["noise_none"] = node("DisableNoise")
    nodes["sampler_low"] = node(
        "SamplerCustomAdvanced",
        noise=E("noise_none"),
        guider=E("guider_low"),
        sampler=E("detail"),
        sigmas=E("split", 1),
        latent_image=E("sampler_high", 0),
    )
    nodes["decode"] = node("VAEDecode", samples=E("sampler_low"), vae=E("vae"))
    nodes["save"] = node("SaveVideo", frames=E("decode"), fps=P("fps"), filename_prefix="easel/animate")
    return {"nodes": nodes, "outputs": ["save"]}


def qop_remove_background():
    nodes = {
        "input_load": node("LoadImage", image=P("input_image")),
        "rembg": node("RemoveBackground", image=E("input_load")),
        "save": node("SaveImage", images=E("rembg"), filename_prefix="qop/remove_background"),
    }
    return {"nodes": nodes, "outputs": ["save"]}


def qop_extract_element():
    nodes = {
        "input_load": node("LoadImage", image=P("input_image")),
        "segment": node(
            "GroundingDinoSAMSegment", image=E("input_load"), prompt=P("element_prompt"), threshold=0.3
        ),
        "save": node("SaveImage", images=E("segment"), filename_prefix="qop/extract_element"),
    }
    return {"nodes": nodes, "outputs": ["save"]}


def _preprocessors(nodes):
    nodes["pose"] = node("OpenPosePreprocessor", image=E("input_load"))
    nodes["depth"] = node("DepthAnythingV2Preprocessor", image=E("input_load"))
    nodes["scribble"] = node("ScribblePreprocessor", image=E("input_load"))
    nodes["lineart"] = node("LineArtPreprocessor", image=E("input_load"))
    for kind in ("pose", "depth", "scribble", "lineart"):
        nodes[f"save_{kind}"] = node("SaveImage", images=E(kind), filename_prefix=f"qop/stencil_{kind}")


def qop_stencil():
    nodes = {"input_load": node("LoadImage", image=P("input_image"))}
    _preprocessors(nodes)
    return {"nodes": nodes, "outputs": ["save_pose", "save_depth", "save_scribble", "save_lineart"]}


def metadata_preprocess():
    nodes = {"input_load": node("LoadImage", image=P("input_image"))}
    nodes["caption"] = node("Florence2Caption", image=E("input_load"))
    nodes["save_caption"] = node("SaveText", text=E("caption"), filename_prefix="meta/caption")
    _preprocessors(nodes)
    return {
        "nodes": nodes,
        "outputs": ["save_caption", "save_pose", "save_depth", "save_scribble", "save_lineart"],
    }


def qop_upscale():
    nodes = {
        "input_load": node("LoadImage", image=P("input_image")),
        "upscale_model": node("UpscaleModelLoader", model_name="4x_ultrasharp.pth"),
        "upscale": node("ImageUpscaleWithModel", upscale_model=E("upscale_model"), image=E("input_load")),
        "scale": node("ImageScaleBy", image=E("upscale"), method="bilinear", scale_by=P("scale_by")),
        "save": node("SaveImage", images=E("scale"), filename_prefix="qop/upscale"),
    }
    return {"nodes": nodes, "outputs": ["save"]}


def qop_extend():
    nodes = {}
    flux_loaders(nodes, unet="flux1-fill-dev.safetensors", styles=False, turbo=True)
    nodes["input_load"] = node("LoadImage", image=P("input_image"))
    nodes["pad"] = node(
        "ImagePadForOutpaint",
        image=E("input_load"),
        left=P("pad"),
        top=P("pad"),
        right=P("pad"),
        bottom=P("pad"),
        feathering=24,
    )
    nodes["pos"] = node("CLIPTextEncode", clip=E("clip"), text=P("prompt"))
    nodes["neg"] = node("CLIPTextEncode", clip=E("clip"), text="")
    nodes["guidance"] = node("FluxGuidance", conditioning=E("pos"), guidance=30.0)
    nodes["inpaint_cond"] = node(
        "InpaintModelConditioning",
        positive=E("guidance"),
        negative=E("neg"),
        vae=E("vae"),
        pixels=E("pad", 0),
        mask=E("pad", 1),
    )
    nodes["guider"] = node(
        "NAGCFGGuider",
        model=E("lora_turbo"),
        positive=E("inpaint_cond", 0),
        negative=E("inpaint_cond", 1),
        nag_scale=9.0,
        cfg=1.0,
    )
    sampler_stack(nodes, "lora_turbo", "guider", "inpaint_cond", denoise=1.0)
    nodes["sampler"]["inputs"]["latent_image"] = ["inpaint_cond", 2]
    nodes["decode"] = node("VAEDecode", samples=E("sampler"), vae=E("vae"))
    nodes["save"] = node("SaveImage", images=E("decode"), filename_prefix="qop/extend")
    return {"nodes": nodes, "outputs": ["save"]}


def qop_sculpt():
    nodes = {
        "input_load": node("LoadImage", image=P("input_image")),
        "mesh": node("Hunyuan3DGenerate", image=E("input_load"), steps=30, seed=P("seed")),
        "save": node("SaveGLB", mesh=E("mesh"), filename_prefix="qop/sculpt"),
    }
    return {"nodes": nodes, "outputs": ["save"]}


TEMPLATES = {
    "draw_flux": draw_flux,
    "draw_sdxl": draw_sdxl,
    "draw_wan22": draw_wan22,
    "paint_flux": lambda: paint_flux(uso=False),
    "paint_flux_uso": lambda: paint_flux(uso=True),
    "trace_flux": lambda: trace_flux(uso=False),
    "trace_flux_uso": lambda: trace_flux(uso=True),
    "trace_wan22": trace_wan22,
    "modify_flux": modify_flux,
    "animate_wan22": animate_wan22,
    "qop_remove_background": qop_remove_background,
    "qop_extract_element": qop_extract_element,
    "qop_stencil": qop_stencil,
    "qop_upscale": qop_upscale,
    "qop_extend": qop_extend,
    "qop_sculpt": qop_sculpt,
    "metadata_preprocess": metadata_preprocess,
}


def main():
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    for name, builder in TEMPLATES.items():
        doc = builder()
        doc = {"name": name, "version": 1, "outputs": doc["outputs"], "nodes": doc["nodes"]}
        path = OUT_DIR / f"{name}.json"
        path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
        print(f"wrote {path.relative_to(OUT_DIR.parent.parent.parent)} ({len(doc['nodes'])} nodes)")


if __name__ == "__main__":
    main()
