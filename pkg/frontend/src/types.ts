/** Wire types for the route-generator JSON API. */

export type Role = "start" | "mid" | "finish";

export interface HoldRef {
  pos: string;
  role: Role;
}

export interface Report {
  min_holds_ok: boolean;
  finish_ok: boolean;
  start_ok: boolean;
  reachable_ok: boolean;
  duplicate_of: string | null;
  valid: boolean;
  details?: Record<string, string>;
}

/** One decoded route as returned by /decode, /sample, or /interpolate. */
export interface Candidate {
  holds: HoldRef[];
  latent: number[];
  probs: number[];
  report: Report;
  t?: number;
}

export interface ModelInfo {
  architecture: {
    input_dim: number;
    latent_dim: number;
    encoder_hidden: number[];
    decoder_hidden: number[];
    n_params: number;
  };
  checkpoint_sha256?: string;
}
