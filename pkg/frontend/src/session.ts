// Session state machine: fetch, walk the 25 pairs, submit, resume.
//
// The controller advances only after the server's receipt for the current
// pair.  Progress and receipts persist in storage so a refresh resumes at
// the same pair.  The participant chooses a screen side; the controller
// maps it back to A/B via the seeded placement.

import {
  Choice,
  DoubleSubmitError,
  StudyApi,
  StudyCompleteError,
  StudySession,
  VoteReceipt,
} from './api.js';
import { SubmissionQueue } from './queue.js';
import { aOnLeft } from './rng.js';

export type ScreenSide = 'left' | 'right' | 'tie';

export type SessionPhase =
  | 'idle'
  | 'loading'
  | 'rating'
  | 'submitting'
  | 'finished'
  | 'study-complete'
  | 'error';

export interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

interface PersistedState {
  session: StudySession;
  progress: number;
  receipts: Record<number, VoteReceipt>;
}

const STORAGE_KEY = 'rater-ui/session';

export class SessionController {
  phase: SessionPhase = 'idle';
  lastError: string | null = null;
  session: StudySession | null = null;
  progress = 0;
  receipts: Record<number, VoteReceipt> = {};

  private readonly queue: SubmissionQueue;

  constructor(
    private readonly api: StudyApi,
    private readonly storage: StorageLike,
    queue?: SubmissionQueue,
  ) {
    this.queue = queue ?? new SubmissionQueue();
  }

  /** Resume the persisted session or claim a fresh one. */
  async start(): Promise<void> {
    this.phase = 'loading';
    const persisted = this.restore();
    if (persisted) {
      this.session = persisted.session;
      this.progress = persisted.progress;
      this.receipts = persisted.receipts;
      this.phase = this.progress >= this.session.pairs.length ? 'finished' : 'rating';
      return;
    }
    try {
      this.session = await this.api.fetchSession();
      this.progress = 0;
      this.receipts = {};
      this.persist();
      this.phase = 'rating';
    } catch (error) {
      if (error instanceof StudyCompleteError) {
        this.phase = 'study-complete';
        return;
      }
      this.lastError = String(error);
      this.phase = 'error';
    }
  }

  /** Retry after a failed start (the "retry prompt" path). */
  async retryStart(): Promise<void> {
    this.lastError = null;
    await this.start();
  }

  get total(): number {
    return this.session?.pairs.length ?? 0;
  }

  get done(): boolean {
    return this.phase === 'finished';
  }

  /** Current pair with its seeded screen placement. */
  current(): { index: number; leftUrl: string; rightUrl: string } | null {
    if (!this.session || this.progress >= this.session.pairs.length) {
      return null;
    }
    const pair = this.session.pairs[this.progress];
    const aLeft = aOnLeft(this.session.session_id, pair.index);
    return {
      index: pair.index,
      leftUrl: aLeft ? pair.media_a : pair.media_b,
      rightUrl: aLeft ? pair.media_b : pair.media_a,
    };
  }

  /**
   * Submit the participant's choice for the current pair.  Resolves once the
   * receipt arrived and the controller advanced; offline submissions retry
   * in order through the queue.
   */
  async choose(side: ScreenSide): Promise<VoteReceipt> {
    if (!this.session) {
      throw new Error('no active session');
    }
    if (this.phase === 'submitting') {
      throw new Error('a submission is already in flight');
    }
    if (this.phase !== 'rating') {
      throw new Error(`cannot vote while ${this.phase}`);
    }
    const pair = this.session.pairs[this.progress];
    if (this.receipts[pair.index]) {
      throw new DoubleSubmitError(pair.index);
    }
    const choice = this.mapChoice(pair.index, side);
    this.phase = 'submitting';
    try {
      const receipt = await this.queue.enqueue(() =>
        this.api.submitChoice(this.session!.session_id, pair.index, choice),
      );
      this.accept(pair.index, receipt);
      return receipt;
    } catch (error) {
      if (error instanceof DoubleSubmitError) {
        // the server already holds this vote; synthesize a local receipt
        const receipt: VoteReceipt = {
          vote_id: -1,
          session_id: this.session.session_id,
          pair_index: pair.index,
        };
        this.accept(pair.index, receipt);
        return receipt;
      }
      this.phase = 'rating';
      this.lastError = String(error);
      throw error;
    }
  }

  private mapChoice(pairIndex: number, side: ScreenSide): Choice {
    if (side === 'tie') {
      return 'TIE';
    }
    const aLeft = aOnLeft(this.session!.session_id, pairIndex);
    if (side === 'left') {
      return aLeft ? 'A' : 'B';
    }
    return aLeft ? 'B' : 'A';
  }

  private accept(pairIndex: number, receipt: VoteReceipt): void {
    this.receipts[pairIndex] = receipt;
    this.progress += 1;
    this.persist();
    this.phase = this.progress >= this.total ? 'finished' : 'rating';
    if (this.phase === 'finished') {
      this.storage.removeItem(STORAGE_KEY);
    }
  }

  private persist(): void {
    if (!this.session) {
      return;
    }
    const state: PersistedState = {
      session: this.session,
      progress: this.progress,
      receipts: this.receipts,
    };
    this.storage.setItem(STORAGE_KEY, JSON.stringify(state));
  }

  private restore(): PersistedState | null {
    const raw = this.storage.getItem(STORAGE_KEY);
    if (!raw) {
      return null;
    }
    try {
      const state = JSON.parse(raw) as PersistedState;
      if (!state.session || typeof state.progress !== 'number') {
        return null;
      }
      return state;
    } catch {
      return null;
    }
  }
}
