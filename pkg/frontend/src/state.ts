/**
 * Client session state, derived purely from service responses. Rebuilding
 * from the same responses yields the same state: there is no client-side
 * inference and no optimistic mutation. The only local touch is the
 * clinician's "defer" control, which reorders the pending-question queue
 * without changing its membership.
 */

import type {
  Recommendation, ScreeningCandidate, ScoreInfo, SessionView,
} from './api.js';

export interface UiSessionState {
  sessionId: string;
  person: string;
  questionQueue: Recommendation[];
  otherActions: Recommendation[];
  answeredLog: { question: string; value: unknown; ts: string }[];
  aceScore: ScoreInfo;
  inferredFlags: string[];
  screeningList: ScreeningCandidate[];
  banner: string | null;
}

/** The question id an ask_question recommendation points at. */
export function questionIdOf(rec: Recommendation): string {
  return rec.args[1] ?? '';
}

export function emptyScore(): ScoreInfo {
  return { score: 0, categories: [], score_class: '' };
}

export function fromView(view: SessionView,
                         previous?: UiSessionState): UiSessionState {
  const answered = new Set(view.answers.map((a) => a.question));
  const queue = view.open_recommendations.filter(
    (rec) => rec.kind === 'ask_question' && !answered.has(questionIdOf(rec)));
  const actions = view.open_recommendations.filter(
    (rec) => rec.kind !== 'ask_question');
  const ordered = previous ? applyPreviousOrder(queue, previous.questionQueue) : queue;
  return {
    sessionId: view.id,
    person: view.person,
    questionQueue: ordered,
    otherActions: actions,
    answeredLog: view.answers.map((a) => ({ ...a })),
    aceScore: view.score,
    inferredFlags: [...view.profile],
    screeningList: previous ? [...previous.screeningList] : [],
    banner: previous?.banner ?? null,
  };
}

/** Keeps locally deferred ordering for entries that are still open. */
function applyPreviousOrder(queue: Recommendation[],
                            previousQueue: Recommendation[]): Recommendation[] {
  const position = new Map(previousQueue.map((rec, i) => [rec.id, i]));
  return [...queue].sort((a, b) => {
    const pa = position.get(a.id);
    const pb = position.get(b.id);
    if (pa === undefined && pb === undefined) return 0;
    if (pa === undefined) return 1;
    if (pb === undefined) return -1;
    return pa - pb;
  });
}

export function applyScreening(state: UiSessionState,
                               body: { candidates: ScreeningCandidate[] }): UiSessionState {
  return { ...state, screeningList: body.candidates.map((c) => ({ ...c })) };
}

/** Moves the identified question one slot down the queue (local only). */
export function deferQuestion(state: UiSessionState, recId: string): UiSessionState {
  const queue = [...state.questionQueue];
  const index = queue.findIndex((rec) => rec.id === recId);
  if (index < 0 || index === queue.length - 1) {
    return state;
  }
  [queue[index], queue[index + 1]] = [queue[index + 1], queue[index]];
  return { ...state, questionQueue: queue };
}

export function withBanner(state: UiSessionState, message: string | null): UiSessionState {
  return { ...state, banner: message };
}
