import { describe, expect, it } from "vitest";

import {
  initialState,
  pinCandidate,
  requestKey,
  resetLatent,
  withCandidate,
  withLatentValue,
} from "../src/state.js";
import type { Candidate } from "../src/types.js";

const candidate: Candidate = {
  holds: [{ pos: "A1", role: "start" }],
  latent: new Array(16).fill(0),
  probs: [],
  report: {
    min_holds_ok: false,
    finish_ok: false,
    start_ok: true,
    reachable_ok: false,
    duplicate_of: null,
    valid: false,
  },
};

describe("UiState", () => {
  it("starts at the prior mean", () => {
    const s = initialState();
    expect(s.latent).toEqual(new Array(16).fill(0));
    expect(s.pinned).toEqual([]);
    expect(s.sliderBound).toBe(3);
    expect(s.reachLimit).toBe(5.0);
  });

  it("clamps slider values to the bound", () => {
    let s = initialState();
    s = withLatentValue(s, 0, 7.5);
    expect(s.latent[0]).toBe(3);
    s = withLatentValue(s, 1, -9);
    expect(s.latent[1]).toBe(-3);
    s = withLatentValue(s, 2, 1.25);
    expect(s.latent[2]).toBe(1.25);
  });

  it("reset returns every dimension to zero", () => {
    let s = initialState();
    s = withLatentValue(s, 5, 2);
    s = resetLatent(s);
    expect(s.latent).toEqual(new Array(16).fill(0));
  });

  it("pinning appends and never mutates earlier entries", () => {
    let s = withCandidate(initialState(), candidate);
    const s1 = pinCandidate(s);
    const s2 = pinCandidate(withCandidate(s1, candidate));
    expect(s1.pinned.length).toBe(1);
    expect(s2.pinned.length).toBe(2);
    expect(s2.pinned[0]).toBe(candidate); // earlier entries untouched
    expect(s.pinned.length).toBe(0); // older states unaffected
  });

  it("pinning without a candidate is a no-op", () => {
    const s = initialState();
    expect(pinCandidate(s)).toBe(s);
  });

  it("request keys are stable for identical state and differ otherwise", () => {
    const s = initialState();
    expect(requestKey(s)).toBe(requestKey(initialState()));
    expect(requestKey(withLatentValue(s, 0, 0.5))).not.toBe(requestKey(s));
    expect(requestKey({ ...s, kOverride: 8 })).not.toBe(requestKey(s));
    expect(requestKey({ ...s, reachLimit: 4.5 })).not.toBe(requestKey(s));
  });
});
