/** Session state for the studio. Pure update helpers so the pieces are
 * testable without a DOM; the pinned list is append-only by construction. */

import type { Candidate } from "./types.js";

export const DEFAULT_SLIDER_BOUND = 3;

export interface UiState {
  latent: number[];
  candidate: Candidate | null;
  pinned: readonly Candidate[];
  kOverride: number | null;
  reachLimit: number;
  sliderBound: number;
}

export function initialState(dim = 16): UiState {
  return {
    latent: new Array(dim).fill(0),
    candidate: null,
    pinned: [],
    kOverride: null,
    reachLimit: 5.0,
    sliderBound: DEFAULT_SLIDER_BOUND,
  };
}

export function withLatentValue(state: UiState, dim: number, value: number): UiState {
  const bound = state.sliderBound;
  const clamped = Math.max(-bound, Math.min(bound, value));
  const latent = state.latent.slice();
  latent[dim] = clamped;
  return { ...state, latent };
}

export function withLatent(state: UiState, latent: number[]): UiState {
  return { ...state, latent: latent.slice() };
}

export function withCandidate(state: UiState, candidate: Candidate | null): UiState {
  return { ...state, candidate };
}

export function resetLatent(state: UiState): UiState {
  return { ...state, latent: new Array(state.latent.length).fill(0) };
}

/** Append the current candidate to the pinned list. Never removes. */
export function pinCandidate(state: UiState): UiState {
  if (!state.candidate) return state;
  return { ...state, pinned: [...state.pinned, state.candidate] };
}

/** Key identifying a decode request; identical keys need no new request. */
export function requestKey(state: UiState): string {
  return JSON.stringify({
    latent: state.latent,
    k: state.kOverride,
    reach: state.reachLimit,
  });
}
