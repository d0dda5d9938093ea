import type { SentenceSpan } from './types.js'

/**
 * Convert a UTF-8 byte span into JS string (UTF-16 code unit) offsets.
 *
 * The server spans always sit on character boundaries; anything that does
 * not decode cleanly or lies out of bounds returns null so the caller can
 * fall back to highlighting the whole paragraph.
 */
export function byteSpanToCharRange(
  text: string,
  span: SentenceSpan,
): { start: number; end: number } | null {
  const bytes = new TextEncoder().encode(text)
  if (span.start < 0 || span.end <= span.start || span.end > bytes.length) {
    return null
  }
  const decoder = new TextDecoder('utf-8', { fatal: true })
  try {
    const prefix = decoder.decode(bytes.slice(0, span.start))
    const middle = decoder.decode(bytes.slice(span.start, span.end))
    return { start: prefix.length, end: prefix.length + middle.length }
  } catch {
    return null // span cuts a multi-byte character
  }
}

/**
 * Render `text` into the container with exactly one highlighted region:
 * the given sentence span when valid, otherwise the whole paragraph.
 * Text nodes only; server text is never interpreted as HTML.
 */
export function renderHighlighted(
  container: HTMLElement,
  text: string,
  span: SentenceSpan | null,
): HTMLElement {
  container.replaceChildren()
  const range = span ? byteSpanToCharRange(text, span) : null
  const mark = container.ownerDocument.createElement('mark')
  mark.className = 'highlight'
  if (range) {
    container.append(text.slice(0, range.start))
    mark.textContent = text.slice(range.start, range.end)
    container.append(mark)
    container.append(text.slice(range.end))
  } else {
    mark.textContent = text
    container.append(mark)
  }
  return mark
}
