// DOM rendering: two synchronized looping videos side by side and three
// equally prominent buttons (left / indistinguishable / right).

import { SessionController } from './session.js';

const SYNC_TOLERANCE_S = 0.25;

/** Nudge the lagging video back into sync with the leader. */
export function syncPlayback(a: HTMLVideoElement, b: HTMLVideoElement): void {
  if (!isFinite(a.currentTime) || !isFinite(b.currentTime)) {
    return;
  }
  const drift = a.currentTime - b.currentTime;
  if (Math.abs(drift) > SYNC_TOLERANCE_S) {
    if (drift > 0) {
      a.currentTime = b.currentTime;
    } else {
      b.currentTime = a.currentTime;
    }
  }
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text) {
    node.textContent = text;
  }
  return node;
}

export class RaterView {
  private syncTimer: number | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly controller: SessionController,
  ) {}

  async boot(): Promise<void> {
    this.render();
    await this.controller.start();
    this.render();
  }

  render(): void {
    this.stopSync();
    this.root.replaceChildren();
    switch (this.controller.phase) {
      case 'loading':
        this.root.append(el('p', 'notice', 'Loading your session...'));
        return;
      case 'study-complete':
        this.root.append(
          el('p', 'notice', 'The study is complete. Thank you for your interest!'),
        );
        return;
      case 'error':
        this.renderError();
        return;
      case 'finished':
        this.root.append(
          el('p', 'notice', 'All pairs rated. Thank you for participating!'),
        );
        return;
      default:
        this.renderPair();
    }
  }

  private renderError(): void {
    this.root.append(el('p', 'notice error', 'Could not reach the study server.'));
    const retry = el('button', 'retry', 'Retry');
    retry.addEventListener('click', () => {
      void this.controller.retryStart().then(() => this.render());
    });
    this.root.append(retry);
  }

  private renderPair(): void {
    const current = this.controller.current();
    if (!current) {
      return;
    }
    const header = el(
      'p',
      'progress',
      `Pair ${this.controller.progress + 1} of ${this.controller.total}`,
    );
    const stage = el('div', 'stage');
    const left = this.video(current.leftUrl, 'left');
    const right = this.video(current.rightUrl, 'right');
    stage.append(left, right);

    const prompt = el(
      'p',
      'prompt',
      'Which video looks more realistic and has fewer compression artifacts?',
    );
    const buttons = el('div', 'choices');
    for (const [side, label] of [
      ['left', 'Left video'],
      ['tie', 'Indistinguishable'],
      ['right', 'Right video'],
    ] as const) {
      const button = el('button', `choice choice-${side}`, label);
      button.addEventListener('click', () => void this.submit(side));
      buttons.append(button);
    }
    this.root.append(header, stage, prompt, buttons);
    this.startSync(left, right);
  }

  private video(src: string, side: string): HTMLVideoElement {
    const node = document.createElement('video');
    node.className = `pane pane-${side}`;
    node.src = src;
    node.muted = true;
    node.autoplay = true;
    node.loop = true;
    node.setAttribute('playsinline', '');
    return node;
  }

  private async submit(side: 'left' | 'right' | 'tie'): Promise<void> {
    const buttons = this.root.querySelectorAll('button');
    buttons.forEach((b) => (b.disabled = true));
    try {
      await this.controller.choose(side);
    } catch {
      buttons.forEach((b) => (b.disabled = false));
      const note = el('p', 'notice error', 'Submission failed, please try again.');
      this.root.append(note);
      return;
    }
    this.render();
  }

  private startSync(a: HTMLVideoElement, b: HTMLVideoElement): void {
    this.syncTimer = window.setInterval(() => syncPlayback(a, b), 500);
  }

  private stopSync(): void {
    if (this.syncTimer !== null) {
      window.clearInterval(this.syncTimer);
      this.syncTimer = null;
    }
  }
}
