// View state: one source of truth per dashboard, observed by the DOM
// layer. The state owns no radiometric numbers of its own; everything
// stored here came out of a service response.

import type { DecodedFrame, FrameMeta, MaskBody } from './types';
import type { RoiPanel, SeriesPanel } from './plots';

export interface HeatmapState {
  meta: FrameMeta;
  frame: DecodedFrame;
  rgba: Uint8ClampedArray;
}

export interface ViewState {
  camera: string | null;
  heatmap: HeatmapState | null;
  maskVersion: number | null;
  maskDraft: MaskBody | null;
  roiPanels: RoiPanel[];
  seriesPanel: SeriesPanel | null;
  message: string | null;
}

export type Listener = (state: ViewState) => void;

export class Store {
  private state: ViewState = {
    camera: null,
    heatmap: null,
    maskVersion: null,
    maskDraft: null,
    roiPanels: [],
    seriesPanel: null,
    message: null,
  };
  private listeners: Listener[] = [];
  // monotonically increasing token; stale async results are dropped
  private frameToken = 0;

  get current(): ViewState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  update(patch: Partial<ViewState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) {
      listener(this.state);
    }
  }

  nextFrameToken(): number {
    this.frameToken += 1;
    return this.frameToken;
  }

  isCurrentFrameToken(token: number): boolean {
    return token === this.frameToken;
  }
}
