import type { QueryResponse, StatusResponse } from './types.js'

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message)
  }
}

async function getJson<T>(url: string, signal?: AbortSignal): Promise<T> {
  const response = await fetch(url, { signal })
  if (!response.ok) {
    let detail = `${response.status}`
    try {
      const body = await response.json()
      if (body && typeof body.detail === 'string') detail = body.detail
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(response.status, detail)
  }
  return (await response.json()) as T
}

export function fetchResults(
  baseUrl: string,
  query: string,
  k: number,
  signal?: AbortSignal,
): Promise<QueryResponse> {
  const params = new URLSearchParams({ q: query, k: String(k) })
  return getJson<QueryResponse>(`${baseUrl}/query?${params}`, signal)
}

export function fetchStatus(baseUrl: string): Promise<StatusResponse> {
  return getJson<StatusResponse>(`${baseUrl}/status`)
}
