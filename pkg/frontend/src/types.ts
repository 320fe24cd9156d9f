// Shapes of the monitoring-service JSON payloads. Temperatures in API
// payloads are Celsius; binary frame pixels keep service-internal units
// (raw signal, or kelvin for corrected frames).

export type FrameKind = 'raw_signal' | 'corrected_temperature';

export interface FrameMeta {
  frame_id: string;
  camera_id: string;
  timestamp_ms: number;
  width: number;
  height: number;
  kind: FrameKind;
  mask_version: number | null;
  method: string | null;
  error_count: number;
  source_frame_id?: string;
}

export interface MaskParameters {
  wall_temp_c: number;
  gas_temp_c: number;
  emis_height: number;
  emis_mean: number;
  emis_sigma: number;
  abs_height: number;
  abs_mean: number;
  abs_sigma: number;
}

export interface MaskRegion {
  polygon: [number, number][];
  parameters: MaskParameters;
}

export interface MaskBody {
  default_parameters: MaskParameters;
  regions: MaskRegion[];
}

export interface MaskPutResponse {
  camera_id: string;
  version: number;
  mask_id: string;
}

export type RoiKind = 'point' | 'line' | 'polygon';

export interface RoiGeometry {
  kind: RoiKind;
  vertices: [number, number][];
}

export interface RoiStatsPayload {
  kind: RoiKind;
  pixel_count: number;
  mean: number;
  std: number;
  minimum: number;
  maximum: number;
  values: number[];
  percentiles: Record<string, number>;
  histogram_counts: number[];
  histogram_edges: number[];
}

export interface RoiQueryResponse {
  frame_id: string;
  frame_kind: FrameKind;
  units: 'C' | 'signal';
  stats: RoiStatsPayload;
}

export interface TimeseriesPoint {
  timestamp_ms: number;
  frame_id: string;
  mean: number;
  std: number;
  minimum: number;
  maximum: number;
  pixel_count: number;
}

export interface TimeseriesResponse {
  camera_id: string;
  units: 'C';
  series: TimeseriesPoint[];
}

export interface DecodedFrame {
  width: number;
  height: number;
  kind: FrameKind;
  timestampMs: number;
  values: Float32Array;
}
