/** DOM wiring for the route studio: sliders steer a latent vector, every
 * change is debounced into a /decode call, and the board always shows a
 * verbatim service response. */

import { ApiClient, apiBaseFromLocation } from "./api.js";
import { boardSvg, failedRules } from "./board.js";
import { createDebouncedRunner, isAbortError } from "./debounce.js";
import { exportFilename, exportJsonl } from "./export.js";
import {
  UiState,
  initialState,
  pinCandidate,
  requestKey,
  resetLatent,
  withCandidate,
  withLatent,
  withLatentValue,
} from "./state.js";
import type { Candidate } from "./types.js";

const api = new ApiClient(apiBaseFromLocation(window.location.search));
const decoder = createDebouncedRunner(150);

let state: UiState = initialState();
const boundParam = parseFloat(
  new URLSearchParams(window.location.search).get("bound") ?? "",
);
if (Number.isFinite(boundParam) && boundParam > 0) {
  state = { ...state, sliderBound: boundParam };
}
let lastGoodKey: string | null = null;

const el = {
  board: document.getElementById("board")!,
  badges: document.getElementById("badges")!,
  banner: document.getElementById("banner")!,
  sliders: document.getElementById("sliders")!,
  modelInfo: document.getElementById("model-info")!,
  seed: document.getElementById("seed-input") as HTMLInputElement,
  sample: document.getElementById("sample-btn") as HTMLButtonElement,
  reset: document.getElementById("reset-btn") as HTMLButtonElement,
  k: document.getElementById("k-input") as HTMLInputElement,
  reach: document.getElementById("reach-input") as HTMLInputElement,
  pin: document.getElementById("pin-btn") as HTMLButtonElement,
  export: document.getElementById("export-btn") as HTMLButtonElement,
  pinnedList: document.getElementById("pinned-list")!,
  interpolate: document.getElementById("interp-btn") as HTMLButtonElement,
  interpStrip: document.getElementById("interp-strip")!,
};

function showBanner(message: string): void {
  el.banner.textContent = message;
  el.banner.classList.add("visible");
}

function clearBanner(): void {
  el.banner.classList.remove("visible");
}

function renderBoard(): void {
  el.board.innerHTML = boardSvg(state.candidate);
  const badges = failedRules(state.candidate);
  el.badges.innerHTML = "";
  if (state.candidate && badges.length === 0) {
    const ok = document.createElement("span");
    ok.className = "badge ok";
    ok.textContent = "passes all rules";
    el.badges.appendChild(ok);
  }
  for (const text of badges) {
    const span = document.createElement("span");
    span.className = "badge fail";
    span.textContent = text;
    el.badges.appendChild(span);
  }
}

function renderPinned(): void {
  el.pinnedList.innerHTML = "";
  state.pinned.forEach((candidate, i) => {
    const item = document.createElement("li");
    const button = document.createElement("button");
    const holds = candidate.holds.length;
    const status = candidate.report.valid ? "ok" : "fail";
    button.innerHTML =
      `pinned-${String(i + 1).padStart(4, "0")} ` +
      `<span class="dot ${status}"></span> ${holds} holds`;
    button.addEventListener("click", () => loadLatent(candidate.latent));
    item.appendChild(button);
    el.pinnedList.appendChild(item);
  });
  el.export.disabled = state.pinned.length === 0;
  el.interpolate.disabled = state.pinned.length === 0;
}

function renderSliders(): void {
  const inputs = el.sliders.querySelectorAll<HTMLInputElement>("input[type=range]");
  inputs.forEach((input, dim) => {
    input.value = String(state.latent[dim]);
    const label = input.previousElementSibling as HTMLElement;
    label.textContent = `z${dim} ${state.latent[dim].toFixed(2)}`;
  });
}

function buildSliders(dim: number): void {
  el.sliders.innerHTML = "";
  for (let i = 0; i < dim; i++) {
    const wrap = document.createElement("div");
    wrap.className = "slider";
    const label = document.createElement("label");
    label.textContent = `z${i} 0.00`;
    const input = document.createElement("input");
    input.type = "range";
    input.min = String(-state.sliderBound);
    input.max = String(state.sliderBound);
    input.step = "0.01";
    input.value = "0";
    input.addEventListener("input", () => {
      state = withLatentValue(state, i, parseFloat(input.value));
      label.textContent = `z${i} ${state.latent[i].toFixed(2)}`;
      scheduleDecode();
    });
    wrap.append(label, input);
    el.sliders.appendChild(wrap);
  }
}

function currentOptions() {
  return {
    k: state.kOverride,
    reachLimit: state.reachLimit,
  };
}

function scheduleDecode(): void {
  const key = requestKey(state);
  if (key === lastGoodKey) return; // identical latent: nothing new to ask
  const latent = state.latent.slice();
  decoder
    .run((signal) => api.decode(latent, { ...currentOptions(), signal }))
    .then((candidate) => {
      state = withCandidate(state, candidate);
      lastGoodKey = key;
      clearBanner();
      renderBoard();
    })
    .catch((err) => {
      if (isAbortError(err)) return; // superseded by a newer change
      showBanner(`decode failed: ${(err as Error).message} (showing last good route)`);
    });
}

function loadLatent(latent: number[]): void {
  state = withLatent(state, latent);
  renderSliders();
  scheduleDecode();
}

function wireControls(): void {
  el.sample.addEventListener("click", () => {
    const seed = parseInt(el.seed.value, 10);
    const chosen = Number.isFinite(seed) ? seed : Math.floor(Math.random() * 2 ** 31);
    el.seed.value = String(chosen);
    decoder.cancel();
    api
      .sample(chosen, 1, currentOptions())
      .then(({ candidates }) => {
        const candidate = candidates[0];
        state = withCandidate(withLatent(state, candidate.latent), candidate);
        lastGoodKey = requestKey(state);
        clearBanner();
        renderSliders();
        renderBoard();
      })
      .catch((err) => showBanner(`sample failed: ${(err as Error).message}`));
  });

  el.reset.addEventListener("click", () => {
    state = resetLatent(state);
    renderSliders();
    scheduleDecode();
  });

  el.k.addEventListener("change", () => {
    const k = parseInt(el.k.value, 10);
    state = { ...state, kOverride: Number.isFinite(k) && k >= 1 ? k : null };
    scheduleDecode();
  });

  el.reach.addEventListener("change", () => {
    const reach = parseFloat(el.reach.value);
    if (Number.isFinite(reach) && reach > 0) {
      state = { ...state, reachLimit: reach };
      scheduleDecode();
    }
  });

  el.pin.addEventListener("click", () => {
    state = pinCandidate(state);
    renderPinned();
  });

  el.export.addEventListener("click", () => {
    const blob = new Blob([exportJsonl(state.pinned)],
                          { type: "application/jsonl" });
    const url = URL.createObjectURL(blob);
    const a = document.createElement("a");
    a.href = url;
    a.download = exportFilename();
    a.click();
    URL.revokeObjectURL(url);
  });

  el.interpolate.addEventListener("click", () => {
    const last = state.pinned[state.pinned.length - 1];
    if (!last) return;
    api
      .interpolate(last.latent, state.latent, 5, currentOptions())
      .then(({ candidates }) => renderInterpolation(candidates))
      .catch((err) => showBanner(`interpolate failed: ${(err as Error).message}`));
  });
}

function renderInterpolation(candidates: Candidate[]): void {
  el.interpStrip.innerHTML = "";
  for (const candidate of candidates) {
    const cell = document.createElement("button");
    cell.className = "interp-cell";
    cell.title = `t=${(candidate.t ?? 0).toFixed(2)}`;
    cell.innerHTML = boardSvg(candidate);
    cell.addEventListener("click", () => loadLatent(candidate.latent));
    el.interpStrip.appendChild(cell);
  }
}

async function start(): Promise<void> {
  renderBoard();
  renderPinned();
  try {
    const info = await api.modelInfo();
    const arch = info.architecture;
    el.modelInfo.textContent =
      `${arch.input_dim} cells, ${arch.latent_dim} latent dims, ` +
      `${arch.n_params.toLocaleString()} parameters`;
    if (arch.latent_dim !== state.latent.length) {
      state = initialState(arch.latent_dim);
    }
    buildSliders(arch.latent_dim);
    scheduleDecode(); // the prior-mean route
  } catch (err) {
    buildSliders(state.latent.length);
    showBanner(
      `service unreachable at ${apiBaseFromLocation(window.location.search)}: ` +
        `${(err as Error).message}. Start it with: routegen serve --model <ckpt>`,
    );
  }
  wireControls();
}

start();
