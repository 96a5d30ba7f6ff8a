import { describe, expect, it } from 'vitest';

import { NetworkError } from '../src/api.js';
import { SubmissionQueue } from '../src/queue.js';

// yields to the macrotask queue so timers in tests can fire between retries
const instantSleep = () => new Promise<void>((resolve) => setTimeout(resolve, 0));

describe('submission queue', () => {
  it('preserves order with one task in flight', async () => {
    const queue = new SubmissionQueue({ sleep: instantSleep });
    const events: string[] = [];
    let inFlight = 0;
    const task = (name: string) => async () => {
      inFlight += 1;
      expect(inFlight).toBe(1);
      events.push(`start ${name}`);
      await new Promise((resolve) => setTimeout(resolve, 5));
      events.push(`end ${name}`);
      inFlight -= 1;
      return name;
    };
    const results = await Promise.all([
      queue.enqueue(task('a')),
      queue.enqueue(task('b')),
      queue.enqueue(task('c')),
    ]);
    expect(results).toEqual(['a', 'b', 'c']);
    expect(events).toEqual([
      'start a', 'end a', 'start b', 'end b', 'start c', 'end c',
    ]);
  });

  it('retries network failures and flushes in order', async () => {
    const queue = new SubmissionQueue({ sleep: instantSleep });
    let offline = true;
    let attempts = 0;
    const flaky = async () => {
      attempts += 1;
      if (offline) {
        throw new NetworkError('offline');
      }
      return 'receipt';
    };
    const promise = queue.enqueue(flaky);
    setTimeout(() => {
      offline = false;
    }, 10);
    await expect(promise).resolves.toBe('receipt');
    expect(attempts).toBeGreaterThan(1);
  });

  it('does not retry non-network errors', async () => {
    const queue = new SubmissionQueue({ sleep: instantSleep });
    let attempts = 0;
    const failing = async () => {
      attempts += 1;
      throw new Error('409 conflict');
    };
    await expect(queue.enqueue(failing)).rejects.toThrow('409');
    expect(attempts).toBe(1);
  });

  it('gives up after maxRetries network failures', async () => {
    const queue = new SubmissionQueue({ sleep: instantSleep, maxRetries: 3 });
    let attempts = 0;
    const dead = async () => {
      attempts += 1;
      throw new NetworkError('still offline');
    };
    await expect(queue.enqueue(dead)).rejects.toThrow('network');
    expect(attempts).toBe(4);
  });
});
