// Order-preserving submission queue.
//
// One request is in flight at a time.  Retryable failures (network loss)
// keep the item at the head of the queue and retry with backoff, so an
// offline submit is flushed as soon as connectivity returns, in order.

import { NetworkError } from './api.js';

export interface QueueOptions {
  retryDelayMs?: number;
  maxRetries?: number;
  sleep?: (ms: number) => Promise<void>;
}

interface QueueItem<T> {
  run: () => Promise<T>;
  resolve: (value: T) => void;
  reject: (error: unknown) => void;
}

const defaultSleep = (ms: number) =>
  new Promise<void>((resolve) => setTimeout(resolve, ms));

export class SubmissionQueue {
  private items: QueueItem<unknown>[] = [];
  private draining = false;
  private readonly retryDelayMs: number;
  private readonly maxRetries: number;
  private readonly sleep: (ms: number) => Promise<void>;

  constructor(options: QueueOptions = {}) {
    this.retryDelayMs = options.retryDelayMs ?? 1000;
    this.maxRetries = options.maxRetries ?? Infinity;
    this.sleep = options.sleep ?? defaultSleep;
  }

  get pending(): number {
    return this.items.length;
  }

  enqueue<T>(run: () => Promise<T>): Promise<T> {
    return new Promise<T>((resolve, reject) => {
      this.items.push({
        run: run as () => Promise<unknown>,
        resolve: resolve as (value: unknown) => void,
        reject,
      });
      void this.drain();
    });
  }

  private async drain(): Promise<void> {
    if (this.draining) {
      return;
    }
    this.draining = true;
    try {
      while (this.items.length > 0) {
        const item = this.items[0];
        let attempt = 0;
        for (;;) {
          try {
            const value = await item.run();
            this.items.shift();
            item.resolve(value);
            break;
          } catch (error) {
            if (error instanceof NetworkError && attempt < this.maxRetries) {
              attempt += 1;
              await this.sleep(this.retryDelayMs * Math.min(attempt, 8));
              continue;
            }
            this.items.shift();
            item.reject(error);
            break;
          }
        }
      }
    } finally {
      this.draining = false;
    }
  }
}
