// Binary frame payload decoder. Layout (little-endian): magic "THFR",
// version u32, width u32, height u32, kind u8, timestamp i64 (unix ms),
// then width*height float32 values row-major.

import type { DecodedFrame, FrameKind } from './types';

const MAGIC = 0x52464854; // "THFR" read as little-endian u32
const HEADER_BYTES = 4 + 4 + 4 + 4 + 1 + 8;

export function decodeFrame(buffer: ArrayBuffer): DecodedFrame {
  if (buffer.byteLength < HEADER_BYTES) {
    throw new Error(`frame payload truncated at ${buffer.byteLength} bytes`);
  }
  const view = new DataView(buffer);
  if (view.getUint32(0, true) !== MAGIC) {
    throw new Error('bad magic, not a frame payload');
  }
  const version = view.getUint32(4, true);
  if (version !== 1) {
    throw new Error(`unsupported frame version ${version}`);
  }
  const width = view.getUint32(8, true);
  const height = view.getUint32(12, true);
  const kindCode = view.getUint8(16);
  const timestampMs = Number(view.getBigInt64(17, true));
  const expected = HEADER_BYTES + width * height * 4;
  if (buffer.byteLength !== expected) {
    throw new Error(
      `frame payload has ${buffer.byteLength} bytes, expected ${expected}`,
    );
  }
  const kind: FrameKind =
    kindCode === 1 ? 'corrected_temperature' : 'raw_signal';
  // payload offset 25 is not 4-byte aligned, so copy via DataView
  const values = new Float32Array(width * height);
  for (let i = 0; i < values.length; i++) {
    values[i] = view.getFloat32(HEADER_BYTES + 4 * i, true);
  }
  return { width, height, kind, timestampMs, values };
}
