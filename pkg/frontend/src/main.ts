// Browser entry: DOM and canvas glue around the controller. All
// computation lives in the imported modules; this file only moves
// pixels and values between the store and the document.

import { ApiClient } from './api';
import { AppController } from './app';
import { Store } from './state';
import type { HeatmapState, ViewState } from './state';
import { PARAMETER_BOUNDS } from './validation';
import type { MaskBody, MaskParameters, RoiKind } from './types';

const api = new ApiClient('');
const store = new Store();
const app = new AppController(api, store);

const canvas = document.getElementById('heatmap') as HTMLCanvasElement;
const cameraSelect = document.getElementById('camera') as HTMLSelectElement;
const roiKindSelect = document.getElementById('roi-kind') as HTMLSelectElement;
const finishButton = document.getElementById('roi-finish') as HTMLButtonElement;
const clearButton = document.getElementById('roi-clear') as HTMLButtonElement;
const applyMaskButton = document.getElementById('mask-apply') as HTMLButtonElement;
const statusLine = document.getElementById('status') as HTMLElement;
const frameTag = document.getElementById('frame-tag') as HTMLElement;
const panelsBox = document.getElementById('panels') as HTMLElement;
const maskForm = document.getElementById('mask-form') as HTMLElement;

let clicks: [number, number][] = [];
let source: EventSource | null = null;

function drawHeatmap(heatmap: HeatmapState): void {
  const { frame, rgba } = heatmap;
  canvas.width = frame.width;
  canvas.height = frame.height;
  const ctx = canvas.getContext('2d');
  if (!ctx) return;
  const image = new ImageData(
    new Uint8ClampedArray(rgba), frame.width, frame.height,
  );
  ctx.putImageData(image, 0, 0);
}

function renderPanels(state: ViewState): void {
  panelsBox.textContent = '';
  for (const panel of state.roiPanels) {
    const div = document.createElement('div');
    div.className = `panel panel-${panel.kind}`;
    if (panel.kind === 'point') {
      div.textContent = `point: ${panel.label}`;
    } else if (panel.kind === 'line') {
      div.textContent = `line: ${panel.label} ` +
        `[${panel.values.map((v) => v.toFixed(1)).join(', ')}]`;
    } else {
      div.textContent = `polygon: ${panel.label}; counts ` +
        `[${panel.counts.join(', ')}]`;
    }
    panelsBox.appendChild(div);
  }
  if (state.seriesPanel) {
    const div = document.createElement('div');
    div.className = 'panel panel-series';
    div.textContent = `series: ${state.seriesPanel.means
      .map((m) => m.toFixed(1))
      .join(', ')} ${state.seriesPanel.units}`;
    panelsBox.appendChild(div);
  }
}

function maskFromForm(): MaskBody {
  const read = (field: keyof MaskParameters): number => {
    const input = maskForm.querySelector<HTMLInputElement>(`[name=${field}]`);
    return input ? Number(input.value) : NaN;
  };
  const fields = Object.keys(PARAMETER_BOUNDS) as (keyof MaskParameters)[];
  const parameters = Object.fromEntries(
    fields.map((f) => [f, read(f)]),
  ) as unknown as MaskParameters;
  return { default_parameters: parameters, regions: [] };
}

store.subscribe((state) => {
  statusLine.textContent = state.message ?? '';
  if (state.heatmap) {
    drawHeatmap(state.heatmap);
    const meta = state.heatmap.meta;
    frameTag.textContent =
      `${meta.frame_id} (${meta.kind}, mask v${meta.mask_version ?? '-'},` +
      ` ${meta.method ?? 'raw'})`;
  }
  renderPanels(state);
});

canvas.addEventListener('click', (event) => {
  const rect = canvas.getBoundingClientRect();
  const x = ((event.clientX - rect.left) / rect.width) * canvas.width;
  const y = ((event.clientY - rect.top) / rect.height) * canvas.height;
  clicks.push([Math.round(x), Math.round(y)]);
  const kind = roiKindSelect.value as RoiKind;
  if ((kind === 'point' && clicks.length === 1)
      || (kind === 'line' && clicks.length === 2)) {
    void app.drawRoi(kind, clicks);
    clicks = [];
  }
});

finishButton.addEventListener('click', () => {
  void app.drawRoi('polygon', clicks);
  clicks = [];
});

clearButton.addEventListener('click', () => {
  clicks = [];
  store.update({ roiPanels: [], seriesPanel: null });
});

applyMaskButton.addEventListener('click', () => {
  void app.editMask(maskFromForm());
});

cameraSelect.addEventListener('change', () => {
  const camera = cameraSelect.value;
  if (source) source.close();
  source = new EventSource(api.streamUrl(camera));
  source.onmessage = (event) => {
    void app.onStreamEvent(JSON.parse(event.data));
  };
  void app.selectCamera(camera);
});

void api.cameras().then(({ cameras }) => {
  cameraSelect.textContent = '';
  for (const camera of cameras) {
    const option = document.createElement('option');
    option.value = camera;
    option.textContent = camera;
    cameraSelect.appendChild(option);
  }
  if (cameras.length > 0) {
    cameraSelect.value = cameras[0];
    cameraSelect.dispatchEvent(new Event('change'));
  }
});
