/**
 * Browser wiring: start form -> interview loop -> screening, with polling
 * for recommendations. At most one mutation request is in flight per
 * session (submit controls disable until the response lands), and every
 * render derives from the latest server responses.
 */

import { ApiError, Client } from './api.js';
import {
  UiSessionState, applyScreening, deferQuestion, fromView, questionIdOf,
  withBanner,
} from './state.js';
import { renderInterview, renderStartForm } from './render.js';

const POLL_INTERVAL_MS = 4000;

export class App {
  private state: UiSessionState | null = null;
  private selectedSymptoms: string[] = [];
  private inFlight = false;
  private pollTimer: number | undefined;

  constructor(private root: HTMLElement, private client: Client) {}

  start(): void {
    this.renderStart();
  }

  private renderStart(): void {
    this.root.innerHTML = renderStartForm();
    const form = this.root.querySelector<HTMLFormElement>('#start-form');
    form?.addEventListener('submit', (event: SubmitEvent) => {
      event.preventDefault();
      const data = new FormData(form);
      const demographics: Record<string, unknown> = {};
      for (const key of ['name', 'age', 'sex', 'address']) {
        const value = data.get(key);
        if (value) {
          demographics[key] = key === 'age' ? Number(value) : String(value);
        }
      }
      void this.mutate(async () => {
        const view = await this.client.createSession(demographics);
        this.state = fromView(view);
        this.schedulePolling();
      });
    });
  }

  private render(): void {
    if (!this.state) {
      this.renderStart();
      return;
    }
    this.root.innerHTML = renderInterview(this.state, this.selectedSymptoms);
    this.bindInterviewControls();
  }

  private bindInterviewControls(): void {
    const state = this.state;
    if (!state) return;

    this.root.querySelector('#dismiss-banner')?.addEventListener('click', () => {
      this.state = withBanner(state, null);
      this.render();
    });

    const head = state.questionQueue[0];
    for (const button of this.root.querySelectorAll<HTMLButtonElement>('[data-answer]')) {
      button.addEventListener('click', (event) => {
        event.preventDefault();
        if (!head) return;
        const value = this.readAnswerValue(button);
        if (value === undefined) return;
        void this.mutate(async () => {
          await this.client.recordAnswer(state.sessionId, questionIdOf(head), value);
          const view = await this.client.getSession(state.sessionId);
          this.state = fromView(view, state);
        });
      });
    }

    for (const button of this.root.querySelectorAll<HTMLButtonElement>('[data-defer]')) {
      button.addEventListener('click', () => {
        this.state = deferQuestion(state, button.dataset.defer ?? '');
        this.render();
      });
    }

    for (const button of this.root.querySelectorAll<HTMLButtonElement>('[data-close]')) {
      button.addEventListener('click', () => {
        void this.mutate(async () => {
          await this.client.closeRecommendation(
            state.sessionId, button.dataset.close ?? '', 'done');
          const view = await this.client.getSession(state.sessionId);
          this.state = fromView(view, state);
        });
      });
    }

    this.root.querySelector('#run-screening')?.addEventListener('click', () => {
      const checked = [...this.root.querySelectorAll<HTMLInputElement>(
        '.symptoms input:checked')].map((el) => el.value);
      this.selectedSymptoms = checked;
      void this.mutate(async () => {
        const body = await this.client.screening(state.sessionId, checked);
        this.state = applyScreening(state, body);
      });
    });
  }

  private readAnswerValue(button: HTMLButtonElement): unknown {
    const mode = button.dataset.answer;
    if (mode === 'true') return true;
    if (mode === 'false') return false;
    const control = button.closest('.answer-control');
    if (mode === 'choice') {
      return control?.querySelector('select')?.value;
    }
    const input = control?.querySelector('input');
    if (!input || input.value === '') return undefined;
    return control?.getAttribute('data-shape') === 'number'
      ? Number(input.value)
      : input.value;
  }

  private async mutate(action: () => Promise<void>): Promise<void> {
    if (this.inFlight) return;
    this.inFlight = true;
    this.setControlsDisabled(true);
    try {
      await action();
    } catch (error) {
      this.handleError(error);
    } finally {
      this.inFlight = false;
      this.render();
    }
  }

  private setControlsDisabled(disabled: boolean): void {
    for (const el of this.root.querySelectorAll<HTMLButtonElement>('button')) {
      el.disabled = disabled;
    }
  }

  private handleError(error: unknown): void {
    if (error instanceof ApiError && error.status === 404 && this.state) {
      // unknown session: back to the start view
      this.state = null;
      this.stopPolling();
      return;
    }
    const message = error instanceof ApiError
      ? error.line !== undefined
        ? `${error.message} (line ${error.line}, column ${error.column})`
        : error.message
      : String(error);
    if (this.state) {
      this.state = withBanner(this.state, message);
    }
  }

  private schedulePolling(): void {
    this.stopPolling();
    this.pollTimer = setInterval(() => {
      void this.poll();
    }, POLL_INTERVAL_MS) as unknown as number;
  }

  private stopPolling(): void {
    if (this.pollTimer !== undefined) {
      clearInterval(this.pollTimer);
      this.pollTimer = undefined;
    }
  }

  private async poll(): Promise<void> {
    const state = this.state;
    if (!state || this.inFlight) return;
    try {
      const view = await this.client.getSession(state.sessionId);
      this.state = fromView(view, state);
      this.render();
    } catch (error) {
      this.handleError(error);
      this.render();
    }
  }
}

export function mount(root: HTMLElement, base = ''): App {
  const app = new App(root, new Client(base));
  app.start();
  return app;
}
