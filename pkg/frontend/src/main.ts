import { initApp } from './app.js'

// Served from the same origin as the API (e.g. mounted under /ui); an
// explicit base can be set via <body data-api-base="http://host:port">.
const base = document.body.dataset.apiBase ?? ''
initApp(document, base)
