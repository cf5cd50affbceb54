// Easel widgets: one station per generation kind, showing every available
// slot for that kind. The widget edits a local draft of the spec, syncs it
// to the server easel, and generation itself is entirely server-side
// (compile -> submit -> watch -> fetch); the widget only streams progress.

import { EngineApi } from "./api";
import { DocumentStore } from "./store";
import type { Easel, EaselKind, EaselSpec, JobEvent, ReferenceSlot } from "./types";

export type SlotName =
  | "prompt"
  | "negative_prompt"
  | "style_presets"
  | "details"
  | "adherence"
  | "preserve"
  | "start_image"
  | "references"
  | "style_reference"
  | "structure"
  | "trace_source_prompt"
  | "trace_target_prompt"
  | "retrace_range"
  | "prompt_pills"
  | "aspect_ratio"
  | "first_frame"
  | "last_frame"
  | "seed"
  | "backend_model";

// every slot each easel kind exposes, in display order
export const EASEL_SLOTS: Record<EaselKind, SlotName[]> = {
  draw: ["prompt", "style_presets", "details", "adherence", "start_image", "preserve", "backend_model", "seed"],
  paint: [
    "prompt",
    "negative_prompt",
    "references",
    "structure",
    "style_reference",
    "style_presets",
    "details",
    "adherence",
    "start_image",
    "preserve",
    "seed",
  ],
  trace: [
    "trace_source_prompt",
    "trace_target_prompt",
    "start_image",
    "retrace_range",
    "structure",
    "style_reference",
    "style_presets",
    "details",
    "adherence",
    "preserve",
    "backend_model",
    "seed",
  ],
  modify: ["prompt", "prompt_pills", "aspect_ratio", "start_image", "details", "adherence", "seed"],
  animate: ["prompt", "negative_prompt", "first_frame", "last_frame", "prompt_pills", "details", "adherence", "seed"],
};

export const MAX_REFERENCES = 3;

export interface GenerationProgress {
  jobId: string;
  runId: string;
  status: JobEvent["status"];
  progress: number;
}

function defaultSpec(kind: EaselKind): EaselSpec {
  return {
    kind,
    prompt: "",
    negative_prompt: "",
    style_presets: [],
    details: 0,
    adherence: 0.5,
    preserve: 0,
    references: [],
    prompt_pills: [],
    retrace_range: [0, 1],
    seed: null,
  };
}

export class EaselWidget {
  spec: EaselSpec;
  easelId: string | null = null;
  position: [number, number];
  lastProgress: GenerationProgress | null = null;

  constructor(
    public api: EngineApi,
    public store: DocumentStore,
    public kind: EaselKind,
    position: [number, number] = [0, 0],
  ) {
    this.spec = defaultSpec(kind);
    this.position = position;
  }

  /** Bind to an existing server easel. */
  static forEasel(api: EngineApi, store: DocumentStore, easel: Easel): EaselWidget {
    const widget = new EaselWidget(api, store, easel.spec.kind, easel.position);
    widget.easelId = easel.easel_id;
    widget.spec = { ...defaultSpec(easel.spec.kind), ...easel.spec };
    return widget;
  }

  slots(): SlotName[] {
    return EASEL_SLOTS[this.kind];
  }

  /** Fill the widget from a provenance recreate result (exact parameters). */
  populate(spec: EaselSpec): void {
    this.kind = spec.kind;
    this.spec = { ...defaultSpec(spec.kind), ...spec };
  }

  setPrompt(prompt: string): void {
    this.spec.prompt = prompt;
  }

  setSlider(name: "details" | "adherence" | "preserve", value: number): void {
    this.spec[name] = Math.min(1, Math.max(0, value));
  }

  setRetraceRange(lo: number, hi: number): void {
    this.spec.retrace_range = [Math.min(lo, hi), Math.max(lo, hi)];
  }

  setReference(index: number, ref: ReferenceSlot | null): void {
    const refs = [...(this.spec.references ?? [])];
    if (ref === null) {
      refs.splice(index, 1);
    } else if (index >= refs.length) {
      if (refs.length >= MAX_REFERENCES) {
        throw new Error(`at most ${MAX_REFERENCES} references`);
      }
      refs.push(ref);
    } else {
      refs[index] = ref;
    }
    this.spec.references = refs;
  }

  togglePill(pill: string): void {
    const pills = new Set(this.spec.prompt_pills ?? []);
    if (pills.has(pill)) pills.delete(pill);
    else pills.add(pill);
    this.spec.prompt_pills = [...pills];
  }

  toggleStylePreset(name: string, strength = 1): void {
    const presets = (this.spec.style_presets ?? []).filter(([n]) => n !== name);
    if (presets.length === (this.spec.style_presets ?? []).length) {
      presets.push([name, strength]);
    }
    this.spec.style_presets = presets;
  }

  /** Create or update the server-side easel with the current draft. */
  async sync(): Promise<string> {
    if (this.easelId === null) {
      const easel = await this.api.createEasel(
        this.store.documentId,
        this.store.firstPage().page_id,
        this.spec,
        this.position,
      );
      this.easelId = easel.easel_id;
    } else {
      await this.api.updateEasel(this.store.documentId, this.easelId, this.spec);
    }
    return this.easelId;
  }

  /**
   * Run the generation and stream progress. Output items are placed by the
   * server next to the easel and arrive through the document event stream.
   */
  async generate(onProgress?: (p: GenerationProgress) => void): Promise<GenerationProgress> {
    const easelId = await this.sync();
    const { job_id, run_id } = await this.api.generate(this.store.documentId, easelId);
    let last: GenerationProgress = { jobId: job_id, runId: run_id, status: "queued", progress: 0 };
    for await (const event of this.api.jobEvents(job_id)) {
      last = { jobId: job_id, runId: run_id, status: event.status, progress: event.progress };
      this.lastProgress = last;
      onProgress?.(last);
      if (event.kind === "status" && ["done", "failed", "cancelled"].includes(event.status)) {
        break;
      }
    }
    // the widget keeps showing the rolled seed so re-runs are reproducible
    const easel = await this.api.documentState(this.store.documentId).then(
      (s) => s.easels.find((e) => e.easel_id === easelId) ?? null,
    );
    if (easel) this.spec.seed = easel.spec.seed ?? this.spec.seed;
    return last;
  }

  /** Items the server dropped next to this easel for a given run. */
  outputsOf(runId: string): string[] {
    return this.store.runs.get(runId)?.output_node_ids ?? [];
  }
}
