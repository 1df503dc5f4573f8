/** Rate-limited, stale-proof request dispatch for live slider tuning.
 *
 * Dispatches at most one request per `minIntervalMs` (leading edge, with a
 * trailing call for the last value), tags each dispatch with a
 * monotonically increasing sequence number, and drops any response that is
 * not from the newest dispatched request, so rapid scrubbing always ends in
 * the state matching the final slider position.
 */

export interface SchedulerHooks<P, R> {
  /** Perform the request; `seq` identifies it for staleness checks. */
  run: (params: P, seq: number) => Promise<R>;
  /** Called with fresh (non-stale) results only. */
  onResult: (result: R, params: P) => void;
  onError?: (err: unknown, params: P) => void;
}

export const MIN_INTERVAL_MS = 250; // <= 4 requests per second

export class RequestScheduler<P, R> {
  private readonly hooks: SchedulerHooks<P, R>;
  private readonly minIntervalMs: number;
  private readonly now: () => number;

  private seq = 0;
  private lastDispatchAt = -Infinity;
  private pending: { params: P } | null = null;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private inFlight = 0;

  constructor(
    hooks: SchedulerHooks<P, R>,
    minIntervalMs: number = MIN_INTERVAL_MS,
    now: () => number = () => Date.now(),
  ) {
    this.hooks = hooks;
    this.minIntervalMs = minIntervalMs;
    this.now = now;
  }

  /** Ask for `params` to be (eventually) simulated; newest call wins. */
  request(params: P): void {
    const wait = this.lastDispatchAt + this.minIntervalMs - this.now();
    if (wait <= 0 && this.timer === null) {
      this.dispatch(params);
      return;
    }
    this.pending = { params };
    if (this.timer === null) {
      this.timer = setTimeout(() => this.flush(), Math.max(wait, 0));
    }
  }

  /** Sequence number of the newest dispatched request. */
  get latestSeq(): number {
    return this.seq;
  }

  get hasInFlight(): boolean {
    return this.inFlight > 0;
  }

  private flush(): void {
    this.timer = null;
    if (this.pending) {
      const { params } = this.pending;
      this.pending = null;
      this.dispatch(params);
    }
  }

  private dispatch(params: P): void {
    const seq = ++this.seq;
    this.lastDispatchAt = this.now();
    this.inFlight += 1;
    this.hooks
      .run(params, seq)
      .then((result) => {
        if (seq === this.seq) {
          this.hooks.onResult(result, params);
        } // else: superseded while in flight - discard silently
      })
      .catch((err) => {
        if (seq === this.seq) {
          this.hooks.onError?.(err, params);
        }
      })
      .finally(() => {
        this.inFlight -= 1;
      });
  }
}
