/** Wire types for the retrieval service JSON API. */

export interface ArticleRef {
  article_id: string
  article_title: string
  section_title: string
  paragraph_index: number
}

export interface SentenceSpan {
  /** Byte offsets into the UTF-8 encoding of `text`. */
  start: number
  end: number
}

export interface QueryResult {
  matched_question: string
  score: number
  source_kind: 'passage' | 'triple'
  article: ArticleRef | null
  text: string
  sentence: SentenceSpan | null
  media_url: string | null
}

export interface QueryResponse {
  results: QueryResult[]
}

export interface StatusResponse {
  entries: number
  passages: number
  triples: number
  dim: number
  version: string
}
