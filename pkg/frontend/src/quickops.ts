// Contextual quick operations on selected media.

import { EngineApi } from "./api";
import { DocumentStore } from "./store";
import type { AssetKind } from "./types";

export interface QuickOpDef {
  kind: string;
  label: string;
  appliesTo: AssetKind[];
  needsPrompt: boolean;
}

export const QUICK_OPS: QuickOpDef[] = [
  { kind: "quick_sketch", label: "Quick Sketch", appliesTo: ["text"], needsPrompt: false },
  { kind: "remove_background", label: "Remove Background", appliesTo: ["image"], needsPrompt: false },
  { kind: "extract_element", label: "Extract Element", appliesTo: ["image"], needsPrompt: true },
  { kind: "palette", label: "Palette", appliesTo: ["image"], needsPrompt: false },
  { kind: "stencil", label: "Stencil", appliesTo: ["image"], needsPrompt: false },
  { kind: "revision", label: "Revision", appliesTo: ["image"], needsPrompt: true },
  { kind: "upscale", label: "Upscale", appliesTo: ["image"], needsPrompt: false },
  { kind: "blend", label: "Blend", appliesTo: ["image"], needsPrompt: false },
  { kind: "extend", label: "Extend", appliesTo: ["image"], needsPrompt: false },
  { kind: "view", label: "View", appliesTo: ["image"], needsPrompt: false },
  { kind: "quick_animate", label: "Quick Animate", appliesTo: ["image"], needsPrompt: false },
  { kind: "sculpt", label: "Sculpt", appliesTo: ["image"], needsPrompt: false },
];

export class QuickOpMenu {
  constructor(
    public api: EngineApi,
    public store: DocumentStore,
  ) {}

  opsFor(assetId: string): QuickOpDef[] {
    const asset = this.store.assets.get(assetId);
    if (!asset) return [];
    return QUICK_OPS.filter((op) => op.appliesTo.includes(asset.kind));
  }

  /** Fire the op; graph-backed ops return a job to watch, local ops resolve
   * immediately with their result. */
  async invoke(
    assetId: string,
    kind: string,
    prompt?: string,
  ): Promise<{ runId: string; jobId?: string; result?: unknown }> {
    const response = await this.api.quickOp(this.store.documentId, kind, assetId, prompt);
    if (response.job_id) {
      await this.api.waitForJob(response.job_id);
    }
    return { runId: response.run_id, jobId: response.job_id, result: response.result };
  }
}
