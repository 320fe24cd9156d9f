// ROI geometry construction from canvas clicks.

import type { RoiGeometry, RoiKind } from './types';

export function geometryFromClicks(
  kind: RoiKind,
  clicks: [number, number][],
): RoiGeometry {
  if (kind === 'point' && clicks.length !== 1) {
    throw new Error('a point needs exactly one click');
  }
  if (kind === 'line' && clicks.length !== 2) {
    throw new Error('a line needs exactly two clicks');
  }
  if (kind === 'polygon') {
    if (clicks.length < 3) {
      throw new Error('a polygon needs at least three clicks');
    }
    if (shoelaceArea(clicks) === 0) {
      throw new Error('polygon clicks are collinear');
    }
  }
  return { kind, vertices: clicks.map(([x, y]) => [x, y]) };
}

function shoelaceArea(vertices: [number, number][]): number {
  let area = 0;
  for (let i = 0; i < vertices.length; i++) {
    const [x0, y0] = vertices[i];
    const [x1, y1] = vertices[(i + 1) % vertices.length];
    area += x0 * y1 - x1 * y0;
  }
  return area / 2;
}
