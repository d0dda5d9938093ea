/**
 * Recorded JSON bodies from a service seeded with one Nile passage and the
 * India flag fact group. Captured verbatim so the UI tests exercise the
 * exact wire shape the server produces.
 */
import type { QueryResponse, StatusResponse } from '../src/types.js'

export const NILE_TEXT =
  'The Nile is a major north-flowing river in northeastern Africa. ' +
  'It is about 6,650 km long. The river drains into the Mediterranean Sea.'

export const FLAG_URL = 'https://commons.wikimedia.org/wiki/File:Flag_of_India.svg'

export const lengthOfNile: QueryResponse = {
  results: [
    {
      matched_question: 'What is the total length of Nile river?',
      score: 0.6218,
      source_kind: 'passage',
      article: {
        article_id: 'article-0',
        article_title: 'Article 0',
        section_title: 'Main',
        paragraph_index: 0,
      },
      text: NILE_TEXT,
      sentence: null,
      media_url: null,
    },
    {
      matched_question: 'Where does the Nile drain?',
      score: 0.3994,
      source_kind: 'passage',
      article: {
        article_id: 'article-0',
        article_title: 'Article 0',
        section_title: 'Main',
        paragraph_index: 0,
      },
      text: NILE_TEXT,
      sentence: null,
      media_url: null,
    },
    {
      matched_question: 'Show me the flag of India?',
      score: 0.2795,
      source_kind: 'triple',
      article: null,
      text: `India: Flag: ${FLAG_URL}`,
      sentence: null,
      media_url: FLAG_URL,
    },
  ],
}

export const nileWithSentence: QueryResponse = {
  results: [
    {
      matched_question: 'Is the Nile a major river in Africa?',
      score: 1.0,
      source_kind: 'passage',
      article: {
        article_id: 'article-0',
        article_title: 'Article 0',
        section_title: 'Main',
        paragraph_index: 0,
      },
      text: NILE_TEXT,
      sentence: { start: 0, end: 63 },
      media_url: null,
    },
  ],
}

export const showIndianFlag: QueryResponse = {
  results: [
    {
      matched_question: 'Show me the flag of India?',
      score: 0.5497,
      source_kind: 'triple',
      article: null,
      text: `India: Flag: ${FLAG_URL}`,
      sentence: null,
      media_url: FLAG_URL,
    },
    {
      matched_question: 'What does the flag of India look like?',
      score: 0.2749,
      source_kind: 'triple',
      article: null,
      text: `India: Flag: ${FLAG_URL}`,
      sentence: null,
      media_url: FLAG_URL,
    },
  ],
}

export const emptyResults: QueryResponse = { results: [] }

export const status: StatusResponse = {
  entries: 5,
  passages: 1,
  triples: 1,
  dim: 384,
  version: '0.1.0',
}
