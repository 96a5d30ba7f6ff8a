// Typed client for the study server.
//
// GET  /session      -> the participant's session (25 blinded pairs)
// POST /vote         -> one choice, answered with a server-assigned vote id
// GET  /study/status -> aggregate progress

export interface SessionPair {
  index: number;
  media_a: string;
  media_b: string;
}

export interface StudySession {
  session_id: string;
  participant_id: string;
  pairs: SessionPair[];
}

export type Choice = 'A' | 'B' | 'TIE';

export interface VoteReceipt {
  vote_id: number;
  session_id: string;
  pair_index: number;
}

export interface StudyStatus {
  sessions_total: number;
  sessions_claimed: number;
  votes_recorded: number;
  votes_expected: number;
}

/** The plan is exhausted; there is nothing left to rate. */
export class StudyCompleteError extends Error {
  constructor() {
    super('study complete');
    this.name = 'StudyCompleteError';
  }
}

/** The server already holds a vote for this pair. */
export class DoubleSubmitError extends Error {
  constructor(pairIndex: number) {
    super(`pair ${pairIndex} already voted`);
    this.name = 'DoubleSubmitError';
  }
}

/** Transport-level failure; safe to retry. */
export class NetworkError extends Error {
  constructor(cause: unknown) {
    super(`network failure: ${String(cause)}`);
    this.name = 'NetworkError';
  }
}

export type FetchLike = typeof fetch;

export class StudyApi {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  async fetchSession(): Promise<StudySession> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}/session`);
    } catch (cause) {
      throw new NetworkError(cause);
    }
    if (response.status === 410) {
      throw new StudyCompleteError();
    }
    if (!response.ok) {
      throw new Error(`GET /session failed: ${response.status}`);
    }
    return (await response.json()) as StudySession;
  }

  async submitChoice(
    sessionId: string,
    pairIndex: number,
    choice: Choice,
  ): Promise<VoteReceipt> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}/vote`, {
        method: 'POST',
        headers: { 'content-type': 'application/json' },
        body: JSON.stringify({
          session_id: sessionId,
          pair_index: pairIndex,
          choice,
        }),
      });
    } catch (cause) {
      throw new NetworkError(cause);
    }
    if (response.status === 409) {
      throw new DoubleSubmitError(pairIndex);
    }
    if (!response.ok) {
      throw new Error(`POST /vote failed: ${response.status}`);
    }
    return (await response.json()) as VoteReceipt;
  }

  async status(): Promise<StudyStatus> {
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}/study/status`);
    } catch (cause) {
      throw new NetworkError(cause);
    }
    if (!response.ok) {
      throw new Error(`GET /study/status failed: ${response.status}`);
    }
    return (await response.json()) as StudyStatus;
  }
}
