/** Debounced single-flight request runner.
 *
 * `run(fn)` waits `delayMs`, then invokes `fn` with an AbortSignal. A newer
 * `run` call during the wait or while a request is in flight supersedes the
 * old one: its timer is cleared, its request aborted, and its promise
 * rejected with an AbortError-named error. At most one request is ever in
 * flight per runner.
 */

export interface DebouncedRunner {
  run<T>(fn: (signal: AbortSignal) => Promise<T>): Promise<T>;
  cancel(): void;
}

function abortError(): Error {
  const err = new Error("superseded");
  err.name = "AbortError";
  return err;
}

export function isAbortError(err: unknown): boolean {
  return err instanceof Error && err.name === "AbortError";
}

export function createDebouncedRunner(delayMs = 150): DebouncedRunner {
  let timer: ReturnType<typeof setTimeout> | null = null;
  let controller: AbortController | null = null;
  let rejectPending: ((err: Error) => void) | null = null;

  function cancel(): void {
    if (timer !== null) {
      clearTimeout(timer);
      timer = null;
    }
    if (controller !== null) {
      controller.abort();
      controller = null;
    }
    if (rejectPending !== null) {
      rejectPending(abortError());
      rejectPending = null;
    }
  }

  function run<T>(fn: (signal: AbortSignal) => Promise<T>): Promise<T> {
    cancel();
    return new Promise<T>((resolve, reject) => {
      rejectPending = reject;
      timer = setTimeout(() => {
        timer = null;
        rejectPending = null;
        const ctrl = new AbortController();
        controller = ctrl;
        Promise.resolve()
          .then(() => fn(ctrl.signal))
          .then(
            (value) => {
              if (controller === ctrl) controller = null;
              resolve(value);
            },
            (err) => {
              if (controller === ctrl) controller = null;
              reject(err);
            },
          );
      }, delayMs);
    });
  }

  return { run, cancel };
}
