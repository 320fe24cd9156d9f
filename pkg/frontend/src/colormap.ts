// Heatmap color mapping. The scale is always the min/max of the current
// frame, so repeated renders of one frame are pixel-identical. NaN
// sentinel pixels (failed corrections) render mid-gray.

export interface ColorScale {
  lo: number;
  hi: number;
}

// compact thermal ramp, dark violet -> red -> yellow -> near white
const STOPS: [number, number, number][] = [
  [13, 8, 64],
  [84, 15, 109],
  [158, 40, 100],
  [219, 92, 60],
  [249, 164, 63],
  [252, 255, 164],
];

export function frameScale(values: Float32Array): ColorScale {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (Number.isNaN(v)) continue;
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!Number.isFinite(lo)) {
    return { lo: 0, hi: 1 };
  }
  if (lo === hi) {
    return { lo, hi: lo + 1 };
  }
  return { lo, hi };
}

export function colorFor(value: number, scale: ColorScale): [number, number, number] {
  if (Number.isNaN(value)) {
    return [128, 128, 128];
  }
  let t = (value - scale.lo) / (scale.hi - scale.lo);
  t = Math.min(1, Math.max(0, t));
  const pos = t * (STOPS.length - 1);
  const idx = Math.min(STOPS.length - 2, Math.floor(pos));
  const frac = pos - idx;
  const a = STOPS[idx];
  const b = STOPS[idx + 1];
  return [
    Math.round(a[0] + frac * (b[0] - a[0])),
    Math.round(a[1] + frac * (b[1] - a[1])),
    Math.round(a[2] + frac * (b[2] - a[2])),
  ];
}

/** RGBA pixel buffer for a decoded frame, scaled to its own min/max. */
export function renderRgba(values: Float32Array, scale: ColorScale): Uint8ClampedArray {
  const out = new Uint8ClampedArray(values.length * 4);
  for (let i = 0; i < values.length; i++) {
    const [r, g, b] = colorFor(values[i], scale);
    out[4 * i] = r;
    out[4 * i + 1] = g;
    out[4 * i + 2] = b;
    out[4 * i + 3] = 255;
  }
  return out;
}
