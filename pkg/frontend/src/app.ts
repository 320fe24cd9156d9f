// Dashboard controller: wires user intents to service calls and the
// store. Contracts kept here:
//   - drawing a geometry issues exactly one ROI query and renders the
//     response verbatim;
//   - editing mask parameters validates client-side, then PUT mask ->
//     POST correct -> reload the corrected frame (heatmap shows the new
//     mask version);
//   - stale frame loads are dropped (responses apply only when they
//     still match the latest request token).

import { ApiClient, ApiError } from './api';
import { frameScale, renderRgba } from './colormap';
import { decodeFrame } from './frameDecode';
import { geometryFromClicks } from './roi';
import { panelFromResponse, seriesFromResponse } from './plots';
import type { RoiPanel } from './plots';
import { Store } from './state';
import { validateParameters } from './validation';
import type { MaskBody, RoiGeometry, RoiKind } from './types';

export class AppController {
  constructor(
    readonly api: ApiClient,
    readonly store: Store,
  ) {}

  async selectCamera(camera: string): Promise<void> {
    this.store.update({ camera, roiPanels: [], seriesPanel: null, message: null });
    const listing = await this.api.listFrames(camera);
    const frames = listing.frames;
    if (frames.length === 0) {
      this.store.update({ heatmap: null, message: 'no frames for camera' });
      return;
    }
    const corrected = frames.filter((f) => f.kind === 'corrected_temperature');
    const newest = (corrected.length ? corrected : frames)[
      (corrected.length ? corrected : frames).length - 1
    ];
    await this.loadFrame(newest.frame_id);
  }

  /** Fetch, decode and display one frame; stale responses are dropped. */
  async loadFrame(frameId: string): Promise<void> {
    const token = this.store.nextFrameToken();
    const [meta, buffer] = await Promise.all([
      this.api.frameMeta(frameId),
      this.api.frameBinary(frameId),
    ]);
    if (!this.store.isCurrentFrameToken(token)) {
      return; // a newer load superseded this one
    }
    const frame = decodeFrame(buffer);
    const rgba = renderRgba(frame.values, frameScale(frame.values));
    this.store.update({
      heatmap: { meta, frame, rgba },
      maskVersion: meta.mask_version ?? this.store.current.maskVersion,
    });
  }

  /**
   * Build a geometry from clicks and query the service for its
   * statistics. Exactly one ROI query per call; the rendered panel is
   * the response, verbatim. On a service error the geometry is kept so
   * the operator can adjust it.
   */
  async drawRoi(kind: RoiKind, clicks: [number, number][]): Promise<RoiPanel | null> {
    const heatmap = this.store.current.heatmap;
    if (!heatmap) {
      this.store.update({ message: 'no frame displayed' });
      return null;
    }
    let geometry: RoiGeometry;
    try {
      geometry = geometryFromClicks(kind, clicks);
    } catch (err) {
      this.store.update({ message: String((err as Error).message) });
      return null;
    }
    try {
      const response = await this.api.roiQuery(heatmap.meta.frame_id, geometry);
      const panel = panelFromResponse(response);
      this.store.update({
        roiPanels: [...this.store.current.roiPanels, panel],
        message: null,
      });
      return panel;
    } catch (err) {
      const detail = err instanceof ApiError ? err.message : String(err);
      this.store.update({ message: `ROI query failed: ${detail}` });
      return null; // geometry stays with the caller for editing
    }
  }

  /**
   * Validate the mask draft client-side, then upsert it and re-correct
   * the currently displayed frame's source. Returns the violations when
   * blocked locally (no request is sent in that case).
   */
  async editMask(draft: MaskBody, method: 'bisection' | 'surrogate' = 'bisection') {
    const violations = [
      ...validateParameters(draft.default_parameters),
      ...draft.regions.flatMap((r) => validateParameters(r.parameters)),
    ];
    if (violations.length > 0) {
      this.store.update({
        message: `mask rejected: ${violations[0].message}`,
      });
      return violations;
    }
    const camera = this.store.current.camera;
    const heatmap = this.store.current.heatmap;
    if (!camera || !heatmap) {
      this.store.update({ message: 'select a camera and frame first' });
      return [];
    }
    const put = await this.api.putMask(camera, draft);
    this.store.update({ maskVersion: put.version, maskDraft: draft });
    const sourceId = heatmap.meta.kind === 'raw_signal'
      ? heatmap.meta.frame_id
      : heatmap.meta.source_frame_id ?? heatmap.meta.frame_id;
    const corrected = await this.api.correctFrame(sourceId, method);
    await this.loadFrame(corrected.frame_id);
    return [];
  }

  async showTimeseries(geometry: RoiGeometry): Promise<void> {
    const camera = this.store.current.camera;
    if (!camera) {
      this.store.update({ message: 'select a camera first' });
      return;
    }
    const response = await this.api.roiTimeseries(camera, geometry);
    this.store.update({ seriesPanel: seriesFromResponse(response) });
  }

  /** SSE handler: follow corrected frames for the selected camera. */
  async onStreamEvent(payload: unknown): Promise<void> {
    const meta = payload as { camera_id?: string; frame_id?: string; kind?: string };
    if (
      meta.camera_id === this.store.current.camera &&
      meta.kind === 'corrected_temperature' &&
      typeof meta.frame_id === 'string'
    ) {
      await this.loadFrame(meta.frame_id);
    }
  }
}
