// Client-side mask parameter validation. Out-of-range values never
// reach the service; the violated bound is reported for the operator.

import type { MaskParameters } from './types';

export const PARAMETER_BOUNDS: Record<keyof MaskParameters, [number, number]> = {
  wall_temp_c: [800, 1300],
  gas_temp_c: [500, 1000],
  emis_height: [0.65, 0.95],
  emis_mean: [3.3, 4.6],
  emis_sigma: [0.2, 1.8],
  abs_height: [0.0, 0.2],
  abs_mean: [3.3, 4.6],
  abs_sigma: [0.2, 1.8],
};

export interface Violation {
  field: keyof MaskParameters;
  value: number;
  lo: number;
  hi: number;
  message: string;
}

export function validateParameters(params: MaskParameters): Violation[] {
  const out: Violation[] = [];
  for (const field of Object.keys(PARAMETER_BOUNDS) as (keyof MaskParameters)[]) {
    const [lo, hi] = PARAMETER_BOUNDS[field];
    const value = params[field];
    if (!Number.isFinite(value) || value < lo || value > hi) {
      out.push({
        field,
        value,
        lo,
        hi,
        message: `${field} = ${value} outside [${lo}, ${hi}]`,
      });
    }
  }
  return out;
}
