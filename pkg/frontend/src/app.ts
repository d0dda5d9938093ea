import { ApiError, fetchResults, fetchStatus } from './api.js'
import { renderHighlighted } from './highlight.js'
import type { QueryResult } from './types.js'

const IMAGE_EXTENSIONS = ['.svg', '.png', '.jpg', '.jpeg', '.gif', '.webp']
const AUDIO_EXTENSIONS = ['.ogg', '.oga', '.mp3', '.wav', '.flac']

export function mediaKind(url: string): 'image' | 'audio' | 'link' {
  const path = url.split('?')[0].toLowerCase()
  if (IMAGE_EXTENSIONS.some((ext) => path.endsWith(ext))) return 'image'
  if (AUDIO_EXTENSIONS.some((ext) => path.endsWith(ext))) return 'audio'
  return 'link'
}

export interface AppHandle {
  /** Resolves when the view for this query is rendered (or superseded). */
  submit(query: string, k?: number): Promise<void>
}

export function initApp(doc: Document, baseUrl = ''): AppHandle {
  const form = doc.querySelector('#query-form') as HTMLFormElement
  const input = doc.querySelector('#query-input') as HTMLInputElement
  const banner = doc.querySelector('#error-banner') as HTMLElement
  const queryEcho = doc.querySelector('#query-echo') as HTMLElement
  const cards = doc.querySelector('#result-cards') as HTMLElement
  const articlePane = doc.querySelector('#article-pane') as HTMLElement
  const mediaPane = doc.querySelector('#media-pane') as HTMLElement
  const statusLine = doc.querySelector('#status-line') as HTMLElement

  let inflight: AbortController | null = null

  function clearView(): void {
    banner.hidden = true
    banner.textContent = ''
    queryEcho.textContent = ''
    cards.replaceChildren()
    articlePane.replaceChildren()
    mediaPane.replaceChildren()
    mediaPane.hidden = true
  }

  function showError(message: string): void {
    clearView()
    banner.textContent = message
    banner.hidden = false
  }

  function renderCard(result: QueryResult, rank: number): HTMLElement {
    const card = doc.createElement('article')
    card.className = 'result-card'
    card.dataset.rank = String(rank)

    const question = doc.createElement('p')
    question.className = 'card-question'
    question.textContent = result.matched_question

    const meta = doc.createElement('p')
    meta.className = 'card-meta'
    const badge = doc.createElement('span')
    badge.className = `badge badge-${result.source_kind}`
    badge.textContent = result.source_kind
    meta.append(badge, ` score ${result.score.toFixed(4)}`)

    card.append(question, meta)
    return card
  }

  function renderArticlePane(top: QueryResult): void {
    const heading = doc.createElement('h2')
    heading.textContent = top.article
      ? `${top.article.article_title} / ${top.article.section_title}`
      : `${top.source_kind === 'triple' ? 'Fact' : 'Passage'}`
    const body = doc.createElement('p')
    body.className = 'article-text'
    articlePane.append(heading, body)
    // Server text goes in verbatim; the only decoration is the single
    // highlight region (sentence when given, else the whole paragraph).
    const mark = renderHighlighted(body, top.text, top.sentence)
    mark.scrollIntoView({ block: 'center' })
  }

  function renderMediaPane(url: string): void {
    mediaPane.hidden = false
    const kind = mediaKind(url)
    if (kind === 'image') {
      const img = doc.createElement('img')
      img.src = url
      img.alt = 'retrieved media'
      mediaPane.append(img)
    } else if (kind === 'audio') {
      const audio = doc.createElement('audio')
      audio.controls = true
      audio.src = url
      mediaPane.append(audio)
    }
    const link = doc.createElement('a')
    link.href = url
    link.target = '_blank'
    link.textContent = url
    mediaPane.append(link)
  }

  async function submit(query: string, k = 3): Promise<void> {
    inflight?.abort()
    const controller = new AbortController()
    inflight = controller
    try {
      const response = await fetchResults(baseUrl, query, k, controller.signal)
      if (controller.signal.aborted) return
      clearView()
      queryEcho.textContent = query
      if (response.results.length === 0) {
        banner.textContent = 'no match'
        banner.hidden = false
        return
      }
      const [top, ...rest] = response.results
      renderArticlePane(top)
      if (top.media_url) renderMediaPane(top.media_url)
      rest.forEach((result, i) => cards.append(renderCard(result, i + 2)))
    } catch (error) {
      if (controller.signal.aborted) return // superseded by a newer query
      showError(error instanceof ApiError ? error.message : 'service unreachable')
    }
  }

  form.addEventListener('submit', (event) => {
    event.preventDefault()
    const query = input.value.trim()
    if (query) void submit(query)
  })

  void fetchStatus(baseUrl)
    .then((s) => {
      statusLine.textContent = `${s.entries} questions indexed over ${s.passages} passages and ${s.triples} fact groups (dim ${s.dim}, v${s.version})`
    })
    .catch(() => {
      statusLine.textContent = 'status unavailable'
    })

  return { submit }
}
