/**
 * Deployment copy of the interview question catalog (prompts and answer
 * shapes). The engine owns the authoritative file; this copy only tells the
 * UI which input control to draw — it performs no inference of its own.
 */

export type AnswerShape = 'boolean' | 'choice' | 'text' | 'number';

export interface QuestionSpec {
  id: string;
  prompt: string;
  shape: AnswerShape;
  choices?: string[];
}

export const QUESTIONS: QuestionSpec[] = [
  {
    id: 'parents_divorced',
    prompt: 'Are the parents divorced or separated?',
    shape: 'boolean',
  },
  {
    id: 'household_member_incarcerated',
    prompt: 'Is a household member incarcerated?',
    shape: 'boolean',
  },
  {
    id: 'feeling_loved',
    prompt: 'Does the child feel loved at home?',
    shape: 'boolean',
  },
  {
    id: 'household_member_alcohol',
    prompt: 'Does anyone in the household have a problem with alcohol?',
    shape: 'boolean',
  },
  {
    id: 'child_age',
    prompt: 'How old is the child?',
    shape: 'number',
  },
];

export function questionSpec(id: string): QuestionSpec | undefined {
  return QUESTIONS.find((q) => q.id === id);
}

/** Symptoms selectable on the screening panel, as CURIEs the service resolves. */
export const SYMPTOM_OPTIONS: { curie: string; label: string }[] = [
  { curie: 'ex:fatigue', label: 'Fatigue' },
  { curie: 'ex:weight_gain', label: 'Weight gain' },
  { curie: 'ex:chest_pain', label: 'Chest pain' },
];
