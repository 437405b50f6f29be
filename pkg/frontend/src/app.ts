// Annotation tool: timeline inspection, token/box annotation, identity
// linking, triple authoring and manual playback over the scenario service.

import { ApiClient, StaleVersionError } from './api.js';
import {
  Bounds,
  boundsArray,
  boxFromDrag,
  clampToRuler,
  fromArray,
  isEmpty,
  toImageCoords,
} from './geometry.js';
import { initialPlayback, PlaybackState, queryAt, stepBack, stepForward } from './playback.js';
import { Lane, layoutLanes } from './timeline.js';
import { snapToTokens, tokenSpans } from './tokens.js';
import type { Annotation, Identity, ScenarioDetail, Segment, Signal } from './types.js';
import { seqText } from './types.js';

const api = new ApiClient('');

interface AppState {
  scenarioId: string | null;
  detail: ScenarioDetail | null;
  lanes: Lane[];
  selectedSignal: Signal | null;
  textSelection: { start: number; stop: number } | null;
  draftBox: Bounds | null;
  playback: PlaybackState;
  identities: Identity[];
  annotator: string;
}

const state: AppState = {
  scenarioId: null,
  detail: null,
  lanes: [],
  selectedSignal: null,
  textSelection: null,
  draftBox: null,
  playback: { t: 0, stops: [] },
  identities: [],
  annotator: '',
};

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setStatus(message: string, isError = false): void {
  const status = el<HTMLDivElement>('status');
  status.textContent = message;
  status.className = isError ? 'status error' : 'status';
}

async function guarded<T>(work: () => Promise<T>): Promise<T | undefined> {
  try {
    return await work();
  } catch (error) {
    if (error instanceof StaleVersionError) {
      if (window.confirm('Scenario changed on the server. Reload it now?')) {
        await loadScenario(state.scenarioId!);
      }
      return undefined;
    }
    setStatus(String(error), true);
    return undefined;
  }
}

// ---------------------------------------------------------------------------
// session + scenario loading

async function start(): Promise<void> {
  state.annotator =
    window.localStorage.getItem('annotator') ??
    window.prompt('Annotator name (used as annotation source)?', 'annotator') ??
    'annotator';
  window.localStorage.setItem('annotator', state.annotator);
  el<HTMLSpanElement>('annotator').textContent = state.annotator;

  const scenarios = await api.scenarios();
  const picker = el<HTMLSelectElement>('scenario-picker');
  picker.innerHTML = '';
  for (const summary of scenarios) {
    const option = document.createElement('option');
    option.value = summary.id;
    option.textContent = `${summary.id} [${summary.ruler.start}..${summary.ruler.end} ms]`;
    picker.appendChild(option);
  }
  picker.onchange = () => void loadScenario(picker.value);
  if (scenarios.length > 0) await loadScenario(scenarios[0].id);
}

async function loadScenario(id: string): Promise<void> {
  state.scenarioId = id;
  state.detail = await api.scenario(id);
  state.selectedSignal = null;
  state.textSelection = null;
  state.draftBox = null;
  state.lanes = layoutLanes(
    state.detail.signals,
    state.detail.scenario.ruler.start,
    state.detail.scenario.ruler.end,
  );
  state.playback = initialPlayback(state.lanes);
  state.identities = await api.identities();
  renderTimeline();
  renderDetail();
  renderPlayback();
  await refreshGraph();
  setStatus(`loaded ${id} (version ${state.detail.version})`);
}

async function reloadKeepingSelection(): Promise<void> {
  const keep = state.selectedSignal?.id ?? null;
  await loadScenario(state.scenarioId!);
  if (keep && state.detail) {
    for (const signals of Object.values(state.detail.signals)) {
      const match = signals.find((signal) => signal.id === keep);
      if (match) {
        state.selectedSignal = match;
        renderDetail();
        break;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// timeline

function renderTimeline(): void {
  const host = el<HTMLDivElement>('timeline');
  host.innerHTML = '';
  const active = new Set(
    state.lanes.flatMap((lane) =>
      lane.bars.filter((bar) => bar.start <= state.playback.t
        && (state.playback.t < bar.end || bar.start === bar.end))
        .map((bar) => bar.signalId)),
  );
  for (const lane of state.lanes) {
    const row = document.createElement('div');
    row.className = 'lane';
    const label = document.createElement('div');
    label.className = 'lane-label';
    label.textContent = lane.modality;
    const track = document.createElement('div');
    track.className = 'lane-track';
    for (const bar of lane.bars) {
      const node = document.createElement('button');
      node.className = 'bar';
      if (state.selectedSignal?.id === bar.signalId) node.classList.add('selected');
      if (active.has(bar.signalId)) node.classList.add('active');
      node.style.left = `${bar.leftPct}%`;
      node.style.width = `${bar.widthPct}%`;
      node.title = `${bar.label} [${bar.start}, ${bar.end}] ms`;
      node.textContent = bar.label;
      node.onclick = () => selectSignal(bar.signalId);
      track.appendChild(node);
    }
    row.append(label, track);
    host.appendChild(row);
  }
}

function selectSignal(signalId: string): void {
  if (!state.detail) return;
  for (const signals of Object.values(state.detail.signals)) {
    const match = signals.find((signal) => signal.id === signalId);
    if (match) {
      state.selectedSignal = match;
      state.textSelection = null;
      state.draftBox = null;
      renderTimeline();
      renderDetail();
      return;
    }
  }
}

// ---------------------------------------------------------------------------
// detail panel

function renderDetail(): void {
  const host = el<HTMLDivElement>('detail');
  host.innerHTML = '';
  const signal = state.selectedSignal;
  if (!signal) {
    host.textContent = 'Click a bar to inspect and annotate its signal.';
    return;
  }
  const header = document.createElement('h3');
  header.textContent = `${signal.modality} signal ${signal.id.slice(0, 8)}… `
    + `at [${signal.time.start}, ${signal.time.end}] ms`;
  host.appendChild(header);

  if (signal.modality === 'text') renderTextDetail(host, signal);
  else if (signal.modality === 'image' || signal.modality === 'video') {
    renderImageDetail(host, signal);
  } else {
    const note = document.createElement('p');
    note.textContent = `${signal.files[0] ?? signal.id} (bar only; no waveform view)`;
    host.appendChild(note);
  }
  renderMentionList(host, signal);
}

function renderTextDetail(host: HTMLElement, signal: Signal): void {
  const text = seqText(signal);
  const tokens = tokenSpans(signal.mentions);
  const paragraph = document.createElement('p');
  paragraph.className = 'utterance';
  paragraph.id = 'utterance-text';
  if (signal.speaker) {
    const who = document.createElement('strong');
    who.textContent = `${signal.speaker.name}: `;
    paragraph.appendChild(who);
  }
  const body = document.createElement('span');
  body.id = 'utterance-body';
  body.textContent = text;
  paragraph.appendChild(body);
  host.appendChild(paragraph);

  const hint = document.createElement('p');
  hint.className = 'hint';
  hint.textContent = tokens.length
    ? 'Select characters; the selection snaps to token boundaries.'
    : 'No token mentions on this signal; selections use raw offsets.';
  host.appendChild(hint);

  paragraph.onmouseup = () => {
    const range = currentSelectionIn(body);
    if (!range) return;
    const snapped = tokens.length
      ? snapToTokens(range.start, range.stop, tokens)
      : range;
    if (!snapped) return;
    state.textSelection = snapped;
    renderSelectionState(signal, text, snapped);
  };

  const selection = document.createElement('div');
  selection.id = 'selection-state';
  host.appendChild(selection);
  if (state.textSelection) renderSelectionState(signal, text, state.textSelection);
}

function currentSelectionIn(node: HTMLElement): { start: number; stop: number } | null {
  const selection = window.getSelection();
  if (!selection || selection.rangeCount === 0) return null;
  const range = selection.getRangeAt(0);
  if (!node.contains(range.startContainer) || !node.contains(range.endContainer)) {
    return null;
  }
  const start = range.startOffset;
  const stop = range.endOffset;
  if (start === stop) return null;
  return { start: Math.min(start, stop), stop: Math.max(start, stop) };
}

function renderSelectionState(
  signal: Signal,
  text: string,
  span: { start: number; stop: number },
): void {
  const host = el<HTMLDivElement>('selection-state');
  host.innerHTML = '';
  const info = document.createElement('p');
  info.textContent = `selection [${span.start}, ${span.stop}) = `
    + `${JSON.stringify(text.slice(span.start, span.stop))}`;
  host.appendChild(info);
  host.appendChild(annotationForm(signal, [{
    type: 'Index',
    container_id: signal.id,
    start: span.start,
    stop: span.stop,
  }]));
}

// ---------------------------------------------------------------------------
// image detail with box drawing

function renderImageDetail(host: HTMLElement, signal: Signal): void {
  const bounds = signal.ruler.bounds ?? [0, 0, 0, 0];
  const width = bounds[2];
  const height = bounds[3];
  const displayWidth = 640;
  const scale = width > 0 ? displayWidth / width : 1;

  const canvas = document.createElement('canvas');
  canvas.id = 'image-canvas';
  canvas.width = displayWidth;
  canvas.height = Math.round(height * scale);
  canvas.className = 'image-canvas';
  host.appendChild(canvas);

  const hint = document.createElement('p');
  hint.className = 'hint';
  hint.textContent = 'Drag on the image to draw a box (clamped to the frame); '
    + 'existing detector boxes are shown for correction.';
  host.appendChild(hint);

  const form = document.createElement('div');
  form.id = 'box-form';
  host.appendChild(form);

  const context = canvas.getContext('2d')!;
  const image = new Image();
  const draw = () => {
    context.clearRect(0, 0, canvas.width, canvas.height);
    if (image.complete && image.naturalWidth > 0) {
      context.drawImage(image, 0, 0, canvas.width, canvas.height);
    } else {
      context.fillStyle = '#223';
      context.fillRect(0, 0, canvas.width, canvas.height);
    }
    context.lineWidth = 2;
    for (const mention of signal.mentions) {
      for (const segment of mention.segment) {
        if (segment.type !== 'BoundingBox') continue;
        const box = fromArray((segment as { bounds: number[] }).bounds);
        context.strokeStyle = '#7dd3fc';
        context.strokeRect(box.x0 * scale, box.y0 * scale,
          (box.x1 - box.x0) * scale, (box.y1 - box.y0) * scale);
      }
    }
    if (state.draftBox) {
      const box = state.draftBox;
      context.strokeStyle = '#f472b6';
      context.strokeRect(box.x0 * scale, box.y0 * scale,
        (box.x1 - box.x0) * scale, (box.y1 - box.y0) * scale);
    }
  };
  image.onload = draw;
  if (state.scenarioId && signal.files[0]) {
    image.src = api.mediaUrl(state.scenarioId, signal.files[0]);
  }
  draw();

  let dragStart: [number, number] | null = null;
  canvas.onmousedown = (event) => {
    const rect = canvas.getBoundingClientRect();
    dragStart = toImageCoords(event.clientX - rect.left, event.clientY - rect.top, scale);
  };
  canvas.onmousemove = (event) => {
    if (!dragStart) return;
    const rect = canvas.getBoundingClientRect();
    const [x, y] = toImageCoords(event.clientX - rect.left, event.clientY - rect.top, scale);
    state.draftBox = clampToRuler(
      boxFromDrag(dragStart[0], dragStart[1], x, y),
      { width, height },
    );
    draw();
  };
  canvas.onmouseup = () => {
    dragStart = null;
    if (state.draftBox && !isEmpty(state.draftBox)) {
      form.innerHTML = '';
      const info = document.createElement('p');
      info.textContent = `box ${JSON.stringify(boundsArray(state.draftBox))}`;
      form.appendChild(info);
      form.appendChild(annotationForm(signal, [{
        type: 'BoundingBox',
        container_id: signal.id,
        bounds: boundsArray(state.draftBox),
      }]));
    }
    draw();
  };
}

// ---------------------------------------------------------------------------
// annotation form (label / identity link / triple)

function annotationForm(signal: Signal, segments: Segment[]): HTMLElement {
  const form = document.createElement('div');
  form.className = 'annotation-form';

  const kind = document.createElement('select');
  for (const option of ['label', 'identity link', 'triple']) {
    const node = document.createElement('option');
    node.value = option;
    node.textContent = option;
    kind.appendChild(node);
  }

  const fields = document.createElement('span');
  const submit = document.createElement('button');
  submit.textContent = 'annotate';

  const renderFields = () => {
    fields.innerHTML = '';
    if (kind.value === 'label') {
      fields.appendChild(textInput('label-value', 'label'));
    } else if (kind.value === 'identity link') {
      fields.appendChild(identityPicker());
    } else {
      fields.append(
        textInput('triple-subject', 'subject iri'),
        textInput('triple-predicate', 'predicate iri'),
        textInput('triple-object', 'object iri'),
        perspectivePicker(),
      );
    }
  };
  kind.onchange = renderFields;
  renderFields();

  submit.onclick = () => void guarded(async () => {
    if (!state.detail || !state.scenarioId) return;
    if (kind.value === 'triple') {
      const subject = valueOf(fields, 'triple-subject');
      const predicate = valueOf(fields, 'triple-predicate');
      const object = valueOf(fields, 'triple-object');
      const perspective = perspectiveOf(fields);
      const result = await api.createTriple(state.scenarioId, {
        subject, predicate, object, perspective,
        signal_id: signal.id, segments, version: state.detail.version,
        source: state.annotator,
      } as never);
      setStatus(`created claim ${result.claim}`);
      await reloadKeepingSelection();
      await refreshGraph();
      return;
    }
    const annotation: Annotation = kind.value === 'label'
      ? {
        type: 'label', source: state.annotator, timestamp: null,
        value: { type: 'Label', value: valueOf(fields, 'label-value') },
      }
      : {
        type: 'link', source: state.annotator, timestamp: null,
        value: { type: 'EntityLink', iri: await pickedIdentity(fields) },
      };
    const result = await api.createMention(
      state.scenarioId!, signal.id, segments, [annotation], state.detail!.version,
    );
    setStatus(`created mention ${result.mention.id}`);
    await reloadKeepingSelection();
  });

  form.append(kind, fields, submit);
  return form;
}

function textInput(id: string, placeholder: string): HTMLInputElement {
  const input = document.createElement('input');
  input.id = id;
  input.placeholder = placeholder;
  return input;
}

function valueOf(root: HTMLElement, id: string): string {
  return (root.querySelector(`#${id}`) as HTMLInputElement).value.trim();
}

function identityPicker(): HTMLElement {
  const wrap = document.createElement('span');
  const select = document.createElement('select');
  select.id = 'identity-picker';
  for (const identity of state.identities) {
    const option = document.createElement('option');
    option.value = identity.iri;
    option.textContent = `${identity.name} (${identity.iri})`;
    select.appendChild(option);
  }
  const fresh = document.createElement('option');
  fresh.value = '__new__';
  fresh.textContent = 'new identity…';
  select.appendChild(fresh);
  wrap.appendChild(select);
  return wrap;
}

async function pickedIdentity(root: HTMLElement): Promise<string> {
  const select = root.querySelector('#identity-picker') as HTMLSelectElement;
  if (select.value !== '__new__') return select.value;
  const name = window.prompt('Name for the new identity?') ?? 'unknown';
  const minted = await api.mintIdentity(name);
  state.identities.push(minted);
  return minted.iri;
}

function perspectivePicker(): HTMLElement {
  const wrap = document.createElement('span');
  wrap.className = 'perspective';
  const certainty = document.createElement('select');
  certainty.id = 'perspective-certainty';
  for (const option of ['', 'CERTAIN', 'PROBABLE', 'POSSIBLE', 'UNDERSPECIFIED']) {
    const node = document.createElement('option');
    node.value = option;
    node.textContent = option || 'certainty?';
    certainty.appendChild(node);
  }
  const polarity = document.createElement('select');
  polarity.id = 'perspective-polarity';
  for (const option of ['', 'POSITIVE', 'NEGATIVE']) {
    const node = document.createElement('option');
    node.value = option;
    node.textContent = option || 'polarity?';
    polarity.appendChild(node);
  }
  wrap.append(certainty, polarity);
  return wrap;
}

function perspectiveOf(root: HTMLElement): Record<string, string> {
  const out: Record<string, string> = {};
  const certainty = (root.querySelector('#perspective-certainty') as HTMLSelectElement).value;
  const polarity = (root.querySelector('#perspective-polarity') as HTMLSelectElement).value;
  if (certainty) out.certainty = certainty;
  if (polarity) out.polarity = polarity;
  return out;
}

// ---------------------------------------------------------------------------
// mention list with delete

function renderMentionList(host: HTMLElement, signal: Signal): void {
  const heading = document.createElement('h4');
  heading.textContent = `${signal.mentions.length} mentions`;
  host.appendChild(heading);
  const list = document.createElement('ul');
  list.className = 'mentions';
  for (const mention of signal.mentions) {
    const item = document.createElement('li');
    const kinds = mention.annotations.map((a) => a.type).join(', ');
    const segments = mention.segment
      .map((segment) => {
        if (segment.type === 'BoundingBox') {
          return JSON.stringify((segment as { bounds: number[] }).bounds);
        }
        const span = segment as { start?: number; stop?: number };
        return `[${span.start}, ${span.stop})`;
      })
      .join(' ');
    item.textContent = `${kinds} @ ${segments} `;
    const remove = document.createElement('button');
    remove.textContent = '✕';
    remove.title = 'delete mention';
    remove.onclick = () => void guarded(async () => {
      await api.deleteMention(mention.id, state.detail!.version);
      setStatus(`deleted mention ${mention.id}`);
      await reloadKeepingSelection();
    });
    item.appendChild(remove);
    list.appendChild(item);
  }
  host.appendChild(list);
}

// ---------------------------------------------------------------------------
// playback + knowledge panel

function renderPlayback(): void {
  const slider = el<HTMLInputElement>('playback-slider');
  const detail = state.detail;
  if (!detail) return;
  slider.min = String(detail.scenario.ruler.start);
  slider.max = String(detail.scenario.ruler.end);
  slider.value = String(state.playback.t);
  el<HTMLSpanElement>('playback-time').textContent = `${state.playback.t} ms`;

  const sources = el<HTMLSelectElement>('query-source');
  const current = sources.value;
  sources.innerHTML = '';
  const any = document.createElement('option');
  any.value = '';
  any.textContent = 'any source';
  sources.appendChild(any);
  for (const identity of state.identities) {
    const option = document.createElement('option');
    option.value = identity.name;
    option.textContent = identity.name;
    sources.appendChild(option);
  }
  sources.value = current;
  renderTimeline();
  void refreshQuery();
}

async function refreshQuery(): Promise<void> {
  if (!state.scenarioId) return;
  const source = el<HTMLSelectElement>('query-source').value || undefined;
  const subject = el<HTMLInputElement>('query-subject').value.trim() || undefined;
  const predicate = el<HTMLInputElement>('query-predicate').value.trim() || undefined;
  const rows = await guarded(() => api.query(
    state.scenarioId!,
    queryAt(state.playback, source, { s: subject, p: predicate }),
  ));
  const host = el<HTMLTableSectionElement>('query-rows');
  host.innerHTML = '';
  for (const row of rows ?? []) {
    const tr = document.createElement('tr');
    for (const cell of [row.subject, row.predicate, row.object,
      row.certainty ?? '', row.polarity ?? '', row.source ?? '',
      String(row.timestamp)]) {
      const td = document.createElement('td');
      td.textContent = cell;
      tr.appendChild(td);
    }
    host.appendChild(tr);
  }
  el<HTMLSpanElement>('query-empty').textContent =
    (rows ?? []).length === 0 ? 'no knowledge at this time (gap)' : '';
}

async function refreshGraph(): Promise<void> {
  if (!state.scenarioId) return;
  const text = await guarded(() => api.graph(state.scenarioId!));
  el<HTMLPreElement>('graph-view').textContent =
    text && text.length > 0 ? text : '(store is empty; press emit)';
}

// ---------------------------------------------------------------------------
// wiring

export function wire(): void {
  el<HTMLButtonElement>('step-back').onclick = () => {
    state.playback = stepBack(state.playback);
    renderPlayback();
  };
  el<HTMLButtonElement>('step-forward').onclick = () => {
    state.playback = stepForward(state.playback);
    renderPlayback();
  };
  el<HTMLInputElement>('playback-slider').oninput = (event) => {
    state.playback = { ...state.playback, t: Number((event.target as HTMLInputElement).value) };
    el<HTMLSpanElement>('playback-time').textContent = `${state.playback.t} ms`;
    renderTimeline();
    void refreshQuery();
  };
  el<HTMLSelectElement>('query-source').onchange = () => void refreshQuery();
  el<HTMLInputElement>('query-subject').onchange = () => void refreshQuery();
  el<HTMLInputElement>('query-predicate').onchange = () => void refreshQuery();
  el<HTMLButtonElement>('emit-button').onclick = () => void guarded(async () => {
    const result = await api.emit(state.scenarioId!);
    setStatus(`emitted ${result.delta} new quads (store size ${result.size})`);
    await refreshGraph();
    await refreshQuery();
  });
  void guarded(start);
}

if (typeof document !== 'undefined' && document.getElementById('timeline')) {
  wire();
}
