import { describe, expect, it } from 'vitest';

import { colorFor, frameScale, renderRgba } from '../src/colormap';

describe('frameScale', () => {
  it('uses the frame min and max', () => {
    const scale = frameScale(new Float32Array([3, 9, 7, 4]));
    expect(scale).toEqual({ lo: 3, hi: 9 });
  });

  it('ignores NaN sentinels', () => {
    const scale = frameScale(new Float32Array([NaN, 5, 8]));
    expect(scale).toEqual({ lo: 5, hi: 8 });
  });

  it('handles constant and all-NaN frames', () => {
    expect(frameScale(new Float32Array([2, 2]))).toEqual({ lo: 2, hi: 3 });
    expect(frameScale(new Float32Array([NaN]))).toEqual({ lo: 0, hi: 1 });
  });
});

describe('renderRgba', () => {
  it('is deterministic: two renders of one frame are pixel-identical', () => {
    const values = new Float32Array([1, 2, 3, NaN, 5, 6]);
    const scale = frameScale(values);
    const a = renderRgba(values, scale);
    const b = renderRgba(values, scale);
    expect(Array.from(a)).toEqual(Array.from(b));
  });

  it('maps extremes to the ramp ends and NaN to gray', () => {
    const values = new Float32Array([0, 10, NaN]);
    const scale = frameScale(values);
    const rgba = renderRgba(values, scale);
    expect([rgba[0], rgba[1], rgba[2]]).toEqual(colorFor(0, scale));
    expect([rgba[4], rgba[5], rgba[6]]).toEqual(colorFor(10, scale));
    expect([rgba[8], rgba[9], rgba[10]]).toEqual([128, 128, 128]);
    expect(rgba[3]).toBe(255);
  });

  it('is monotone in brightness along the ramp', () => {
    const scale = { lo: 0, hi: 1 };
    const luma = (t: number) => {
      const [r, g, b] = colorFor(t, scale);
      return 0.2126 * r + 0.7152 * g + 0.0722 * b;
    };
    let previous = -1;
    for (let t = 0; t <= 1.0001; t += 0.05) {
      const current = luma(t);
      expect(current).toBeGreaterThan(previous);
      previous = current;
    }
  });
});
