import { describe, expect, it } from 'vitest';

import { decodeFrame } from '../src/frameDecode';
import { encodeFrame } from './testutil';

describe('decodeFrame', () => {
  it('round-trips an encoded payload', () => {
    const values = [1.5, 2.5, 3.5, 4.5, 5.5, 6.5];
    const frame = decodeFrame(encodeFrame(3, 2, values, 1, 777));
    expect(frame.width).toBe(3);
    expect(frame.height).toBe(2);
    expect(frame.kind).toBe('corrected_temperature');
    expect(frame.timestampMs).toBe(777);
    expect(Array.from(frame.values)).toEqual(values);
  });

  it('decodes raw signal kind', () => {
    const frame = decodeFrame(encodeFrame(1, 1, [42], 0));
    expect(frame.kind).toBe('raw_signal');
  });

  it('preserves NaN sentinel pixels', () => {
    const frame = decodeFrame(encodeFrame(2, 1, [NaN, 1.0]));
    expect(Number.isNaN(frame.values[0])).toBe(true);
    expect(frame.values[1]).toBe(1.0);
  });

  it('rejects truncated payloads', () => {
    const buffer = encodeFrame(3, 2, [1, 2, 3, 4, 5, 6]);
    expect(() => decodeFrame(buffer.slice(0, 10))).toThrow(/truncated/);
    expect(() => decodeFrame(buffer.slice(0, buffer.byteLength - 4)))
      .toThrow(/expected/);
  });

  it('rejects bad magic and version', () => {
    const buffer = encodeFrame(1, 1, [0]);
    const broken = new Uint8Array(buffer.slice(0));
    broken[0] = 0x58;
    expect(() => decodeFrame(broken.buffer)).toThrow(/magic/);
    const versioned = new Uint8Array(buffer.slice(0));
    versioned[4] = 9;
    expect(() => decodeFrame(versioned.buffer)).toThrow(/version/);
  });
});
