/**
 * Pure view rendering: state in, HTML string out. Rendering twice from the
 * same state yields identical markup, which is what the snapshot tests pin.
 */

import type { Recommendation } from './api.js';
import { SYMPTOM_OPTIONS, questionSpec } from './catalog.js';
import { UiSessionState, questionIdOf } from './state.js';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function localName(iri: string): string {
  const hash = iri.lastIndexOf('#');
  return hash >= 0 ? iri.slice(hash + 1) : iri;
}

export function renderStartForm(): string {
  return `<form id="start-form" class="start-form">
  <h2>Start interview session</h2>
  <label>Name <input name="name" type="text"></label>
  <label>Age <input name="age" type="number" min="0" max="120"></label>
  <label>Sex <input name="sex" type="text"></label>
  <label>Address <input name="address" type="text"></label>
  <button type="submit">Begin</button>
</form>`;
}

function renderAnswerControl(questionId: string): string {
  const spec = questionSpec(questionId);
  const shape = spec?.shape ?? 'text';
  if (shape === 'boolean') {
    return `<div class="answer-control" data-shape="boolean">
      <button data-answer="true">Yes</button>
      <button data-answer="false">No</button>
    </div>`;
  }
  if (shape === 'choice') {
    const options = (spec?.choices ?? [])
      .map((c) => `<option value="${escapeHtml(c)}">${escapeHtml(c)}</option>`)
      .join('');
    return `<div class="answer-control" data-shape="choice">
      <select>${options}</select><button data-answer="choice">Record</button>
    </div>`;
  }
  const inputType = shape === 'number' ? 'number' : 'text';
  return `<div class="answer-control" data-shape="${shape}">
    <input type="${inputType}"><button data-answer="input">Record</button>
  </div>`;
}

function renderProvenancePopover(rec: Recommendation): string {
  return `<span class="explain" title="rule ${escapeHtml(rec.rule)}">&#9432;</span>`;
}

export function renderQueue(state: UiSessionState): string {
  if (!state.questionQueue.length) {
    return '<p class="empty-queue">No pending recommended questions.</p>';
  }
  const [head, ...rest] = state.questionQueue;
  const headId = questionIdOf(head);
  const prompt = questionSpec(headId)?.prompt ?? head.text;
  const upcoming = rest
    .map((rec) => {
      const qid = questionIdOf(rec);
      const text = questionSpec(qid)?.prompt ?? rec.text;
      return `<li data-rec="${escapeHtml(rec.id)}">${escapeHtml(text)} ` +
        `${renderProvenancePopover(rec)} ` +
        `<button class="defer" data-defer="${escapeHtml(rec.id)}">defer</button></li>`;
    })
    .join('\n    ');
  return `<div class="question-panel">
  <h3>Current question</h3>
  <p class="prompt" data-question="${escapeHtml(headId)}">${escapeHtml(prompt)} ${renderProvenancePopover(head)}</p>
  ${renderAnswerControl(headId)}
  <button class="defer" data-defer="${escapeHtml(head.id)}">defer</button>
  <h4>Up next</h4>
  <ol class="queue">
    ${upcoming || '<li class="none">nothing queued</li>'}
  </ol>
</div>`;
}

export function renderScoreGauge(state: UiSessionState): string {
  const chips = state.aceScore.categories
    .map((c) => `<span class="chip">${escapeHtml(localName(c))}</span>`)
    .join(' ');
  return `<div class="score-gauge" data-score="${state.aceScore.score}">
  <strong>ACE score: ${state.aceScore.score}</strong>
  <div class="chips">${chips || '<span class="chip none">none</span>'}</div>
</div>`;
}

export function renderFlags(state: UiSessionState): string {
  const items = state.inferredFlags
    .map((f) => `<li>${escapeHtml(localName(f))}</li>`)
    .join('\n    ');
  return `<div class="flags">
  <h4>Inferred profile</h4>
  <ul>
    ${items || '<li class="none">none</li>'}
  </ul>
</div>`;
}

export function renderAnsweredLog(state: UiSessionState): string {
  const rows = state.answeredLog
    .map((a) => `<li>${escapeHtml(a.question)} = ${escapeHtml(String(a.value))}</li>`)
    .join('\n    ');
  return `<div class="answered">
  <h4>Answered</h4>
  <ol>
    ${rows || '<li class="none">no answers yet</li>'}
  </ol>
</div>`;
}

export function renderScreeningPanel(state: UiSessionState,
                                     selected: string[] = []): string {
  const boxes = SYMPTOM_OPTIONS
    .map((s) => {
      const checked = selected.includes(s.curie) ? ' checked' : '';
      return `<label><input type="checkbox" value="${escapeHtml(s.curie)}"${checked}> ` +
        `${escapeHtml(s.label)}</label>`;
    })
    .join('\n    ');
  const rows = state.screeningList
    .map((c) => `<li data-nho="${escapeHtml(c.nho)}">${escapeHtml(c.label)}</li>`)
    .join('\n    ');
  return `<div class="screening-panel">
  <h3>Screening</h3>
  <fieldset class="symptoms">
    ${boxes}
  </fieldset>
  <button id="run-screening">Find outcomes to screen for</button>
  <ol class="screening-results">
    ${rows || '<li class="none">no candidates</li>'}
  </ol>
</div>`;
}

export function renderActionsPanel(state: UiSessionState): string {
  const rows = state.otherActions
    .map((rec) =>
      `<li data-rec="${escapeHtml(rec.id)}">[${escapeHtml(rec.kind)}] ` +
      `${escapeHtml(rec.text)} ${renderProvenancePopover(rec)} ` +
      `<button class="close-rec" data-close="${escapeHtml(rec.id)}">close</button></li>`)
    .join('\n    ');
  return `<div class="actions-panel">
  <h3>Actions</h3>
  <ul>
    ${rows || '<li class="none">no open actions</li>'}
  </ul>
</div>`;
}

export function renderBanner(state: UiSessionState): string {
  if (!state.banner) {
    return '';
  }
  return `<div class="banner" role="alert">${escapeHtml(state.banner)} ` +
    '<button id="dismiss-banner">dismiss</button></div>';
}

export function renderInterview(state: UiSessionState,
                                selectedSymptoms: string[] = []): string {
  return `${renderBanner(state)}
<section class="interview" data-session="${escapeHtml(state.sessionId)}">
${renderScoreGauge(state)}
${renderQueue(state)}
${renderAnsweredLog(state)}
${renderFlags(state)}
${renderScreeningPanel(state, selectedSymptoms)}
${renderActionsPanel(state)}
</section>`;
}
