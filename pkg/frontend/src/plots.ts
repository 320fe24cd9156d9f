// Pure plot models: the UI renders these verbatim from service
// responses, never recomputing statistics on its own.

import type { RoiQueryResponse, TimeseriesResponse } from './types';

export interface PointPanel {
  kind: 'point';
  mean: number;
  std: number;
  units: string;
  label: string;
}

export interface LinePanel {
  kind: 'line';
  values: number[];
  units: string;
  label: string;
}

export interface HistogramPanel {
  kind: 'polygon';
  counts: number[];
  edges: number[];
  mean: number;
  std: number;
  percentiles: Record<string, number>;
  pixelCount: number;
  units: string;
  label: string;
}

export type RoiPanel = PointPanel | LinePanel | HistogramPanel;

export function panelFromResponse(response: RoiQueryResponse): RoiPanel {
  const stats = response.stats;
  const units = response.units;
  if (stats.kind === 'point') {
    return {
      kind: 'point',
      mean: stats.mean,
      std: stats.std,
      units,
      label: `${stats.mean.toFixed(2)} ± ${stats.std.toFixed(2)} ${units}`,
    };
  }
  if (stats.kind === 'line') {
    return {
      kind: 'line',
      values: stats.values,
      units,
      label: `${stats.values.length} pixels along line`,
    };
  }
  return {
    kind: 'polygon',
    counts: stats.histogram_counts,
    edges: stats.histogram_edges,
    mean: stats.mean,
    std: stats.std,
    percentiles: stats.percentiles,
    pixelCount: stats.pixel_count,
    units,
    label: `${stats.pixel_count} pixels, mean ${stats.mean.toFixed(2)} ${units}`,
  };
}

export interface SeriesPanel {
  timestamps: number[];
  means: number[];
  units: string;
}

export function seriesFromResponse(response: TimeseriesResponse): SeriesPanel {
  return {
    timestamps: response.series.map((p) => p.timestamp_ms),
    means: response.series.map((p) => p.mean),
    units: response.units,
  };
}
