// Thin typed client for the monitoring service. Every displayed number
// in the UI originates from one of these calls; the optional traffic
// log records request/response pairs so tests can assert that.

import type {
  FrameMeta,
  MaskBody,
  MaskPutResponse,
  RoiGeometry,
  RoiQueryResponse,
  TimeseriesResponse,
} from './types';

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export interface TrafficRecord {
  method: string;
  url: string;
  body?: unknown;
  response?: unknown;
}

export class TrafficLog {
  records: TrafficRecord[] = [];

  note(record: TrafficRecord): void {
    this.records.push(record);
  }

  count(method: string, urlPrefix: string): number {
    return this.records.filter(
      (r) => r.method === method && r.url.startsWith(urlPrefix),
    ).length;
  }
}

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly base: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
    readonly log: TrafficLog = new TrafficLog(),
  ) {}

  private async json<T>(method: string, path: string, body?: unknown): Promise<T> {
    const url = `${this.base}${path}`;
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { 'content-type': 'application/json' };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchImpl(url, init);
    if (!response.ok) {
      let detail = `${response.status}`;
      try {
        const payload = (await response.json()) as { error?: string };
        if (payload.error) detail = payload.error;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(detail, response.status);
    }
    const payload = (await response.json()) as T;
    this.log.note({ method, url, body, response: payload });
    return payload;
  }

  cameras(): Promise<{ cameras: string[] }> {
    return this.json('GET', '/cameras');
  }

  listFrames(camera: string): Promise<{ frames: FrameMeta[] }> {
    return this.json('GET', `/frames?camera=${encodeURIComponent(camera)}`);
  }

  frameMeta(frameId: string): Promise<FrameMeta> {
    return this.json('GET', `/frames/${frameId}/meta`);
  }

  async frameBinary(frameId: string): Promise<ArrayBuffer> {
    const url = `${this.base}/frames/${frameId}`;
    const response = await this.fetchImpl(url, { method: 'GET' });
    if (!response.ok) {
      throw new ApiError(`frame fetch failed: ${response.status}`, response.status);
    }
    const buffer = await response.arrayBuffer();
    this.log.note({ method: 'GET', url, response: `<${buffer.byteLength} bytes>` });
    return buffer;
  }

  putMask(camera: string, mask: MaskBody): Promise<MaskPutResponse> {
    return this.json('PUT', `/masks/${camera}`, mask);
  }

  getMask(camera: string): Promise<MaskBody & { version: number }> {
    return this.json('GET', `/masks/${camera}`);
  }

  correctFrame(frameId: string, method: 'bisection' | 'surrogate'): Promise<FrameMeta> {
    return this.json('POST', `/frames/${frameId}/correct`, { method });
  }

  roiQuery(frameId: string, geometry: RoiGeometry): Promise<RoiQueryResponse> {
    return this.json('POST', '/roi/query', { frame_id: frameId, geometry });
  }

  roiTimeseries(camera: string, geometry: RoiGeometry): Promise<TimeseriesResponse> {
    const geom = encodeURIComponent(JSON.stringify(geometry));
    return this.json('GET', `/roi/timeseries?camera=${camera}&geom=${geom}`);
  }

  streamUrl(camera: string): string {
    return `${this.base}/stream?camera=${encodeURIComponent(camera)}`;
  }
}
