import { ApiClient } from './api'
import { buildComparison, buildPatternCards, renderComparison, renderRadar } from './charts'
import { wirePatternEditor, wireSegmentSlider } from './controls'
import { ImageStrip } from './imagestrip'
import { buildMapLayers, renderMap } from './map'
import { UiState } from './state'
import type { PatternCatalog, RouteSet, Side, TrajectoryRef } from './types'
import { trajectoryLabel } from './types'

const api = new ApiClient()
const state = new UiState()
let catalog: PatternCatalog | null = null

const el = {
  status: document.getElementById('status') as HTMLElement,
  map: document.getElementById('map') as unknown as SVGSVGElement,
  badges: document.getElementById('badges') as HTMLElement,
  cards: document.getElementById('pattern-cards') as HTMLElement,
  inlet: document.getElementById('comparison') as HTMLElement,
  trajectories: document.getElementById('trajectory-list') as HTMLElement,
  markers: document.getElementById('markers') as HTMLElement,
  strip: document.getElementById('image-strip') as HTMLElement,
  form: document.getElementById('query-form') as HTMLFormElement,
  origin: document.getElementById('origin') as HTMLInputElement,
  destination: document.getElementById('destination') as HTMLInputElement,
  segSlider: document.getElementById('seg-len') as HTMLInputElement,
  segReadout: document.getElementById('seg-len-readout') as HTMLElement,
  columns: document.getElementById('columns') as HTMLInputElement,
  sideFilter: document.getElementById('side-filter') as HTMLSelectElement,
}

const strip = new ImageStrip(api, el.strip, state.imageColumns)

function setStatus(message: string) {
  el.status.textContent = message
}

function parsePoint(text: string): [number, number] | null {
  const parts = text.split(',').map((p) => Number(p.trim()))
  return parts.length === 2 && parts.every(Number.isFinite) ? [parts[0], parts[1]] : null
}

function redrawMap() {
  if (!state.routeSet || !catalog) return
  const model = buildMapLayers(state.routeSet, state, catalog)
  renderMap(el.map, model, { width: 640, height: 480, pad: 24 })
  el.badges.innerHTML = ''
  for (const badge of model.badges) {
    const span = document.createElement('span')
    span.className = 'badge error'
    span.textContent = badge
    el.badges.appendChild(span)
  }
  for (const layer of el.map.querySelectorAll('g[data-trajectory]')) {
    layer.addEventListener('click', () => {
      const [routeId, side] = (layer.getAttribute('data-trajectory') ?? '').split('/')
      const route = state.routeSet?.routes.find((r) => r.id === routeId)
      if (!route) return
      state.toggleHighlight({ routeId, routeIndex: route.index, side: side as Side })
      redrawMap()
      redrawComparison()
      redrawMarkers()
    })
  }
}

function redrawCards() {
  if (!catalog) return
  el.cards.innerHTML = ''
  for (const card of buildPatternCards(catalog)) {
    const node = document.createElement('article')
    node.className = 'pattern-card'
    node.innerHTML = `
      <header>
        <span class="swatch" style="background:${card.color}"></span>
        <input name="pattern-name" value="${card.name}" />
        <input name="pattern-color" type="color" value="${card.color}" />
      </header>
      <div class="card-body"></div>
      <footer>
        <span>${card.memberCount} images</span>
        <span>pattern image #${card.patternImage}</span>
        <details><summary>sample images</summary>
          <div class="sample-matrix">${card.sampleImages.map((s) => `<span>#${s}</span>`).join('')}</div>
        </details>
      </footer>`
    node.querySelector('.card-body')?.appendChild(renderRadar(card.radar))
    wirePatternEditor(node, api, card.id, {
      onUpdated: () => void refreshCatalog(),
      onError: (message) => setStatus(message),
    })
    el.cards.appendChild(node)
  }
}

function highlightedPairs() {
  if (!state.routeSet) return []
  const pairs = []
  for (const ref of state.highlighted) {
    const route = state.routeSet.routes.find((r) => r.id === ref.routeId)
    if (route) pairs.push({ ref, distribution: route.trajectories[ref.side].distribution })
  }
  return pairs
}

function redrawComparison() {
  if (!catalog) return
  const pairs = highlightedPairs()
  el.inlet.innerHTML = ''
  if (pairs.length === 0) {
    el.inlet.textContent = 'click a trajectory on the map to highlight it (up to two)'
    return
  }
  renderComparison(el.inlet, buildComparison(pairs, catalog))
}

function redrawTrajectoryList() {
  el.trajectories.innerHTML = ''
  if (!state.routeSet) return
  for (const route of state.routeSet.routes) {
    for (const side of ['L', 'R'] as Side[]) {
      const ref: TrajectoryRef = { routeId: route.id, routeIndex: route.index, side }
      const button = document.createElement('button')
      button.textContent = trajectoryLabel(ref)
      button.className = state.isHighlighted(route.id, side) ? 'selected' : ''
      button.addEventListener('click', () => {
        state.toggleHighlight(ref)
        redrawMap()
        redrawComparison()
        redrawMarkers()
        redrawTrajectoryList()
      })
      el.trajectories.appendChild(button)
    }
  }
}

function redrawMarkers() {
  el.markers.innerHTML = ''
  for (const ref of state.highlighted) {
    const row = document.createElement('label')
    row.textContent = `${trajectoryLabel(ref)} marker`
    const slider = document.createElement('input')
    slider.type = 'range'
    slider.min = '0'
    slider.max = String(Math.round(state.routeLength(ref)))
    slider.value = String(state.markerAt(ref))
    slider.addEventListener('input', () => {
      const at = state.moveMarker(ref, Number(slider.value))
      strip.window = state.imageColumns
      strip.onMarkerDrag({ ...ref, side: state.sideFor(ref) }, at)
    })
    row.appendChild(slider)
    el.markers.appendChild(row)
  }
}

async function refreshCatalog() {
  catalog = await api.getPatterns()
  redrawCards()
  redrawMap()
  redrawComparison()
}

async function runQuery() {
  const origin = parsePoint(el.origin.value)
  const destination = parsePoint(el.destination.value)
  if (!origin || !destination) {
    setStatus('origin and destination must be lat,lon')
    return
  }
  setStatus('querying routes...')
  try {
    const routeSet: RouteSet = await api.queryRoutes({
      origin,
      destination,
      region: state.region ?? undefined,
      seg_len_m: state.segmentLenM,
    })
    state.setRouteSet(routeSet)
    setStatus(`${routeSet.routes.length} candidate routes`)
    redrawMap()
    redrawComparison()
    redrawTrajectoryList()
    redrawMarkers()
  } catch (err) {
    setStatus(err instanceof Error ? err.message : String(err))
  }
}

async function boot() {
  try {
    const regions = await api.getRegions()
    if (regions.length > 0) {
      state.region = regions[0].id
      const bbox = regions[0].bbox
      if (bbox) {
        el.origin.value = `${bbox[0].toFixed(5)},${bbox[1].toFixed(5)}`
        el.destination.value = `${bbox[2].toFixed(5)},${bbox[3].toFixed(5)}`
      }
      setStatus(`region ${regions[0].id}: ${regions[0].sample_count} samples`)
    }
    await refreshCatalog()
  } catch (err) {
    setStatus(`server unavailable: ${err instanceof Error ? err.message : err}`)
  }
}

el.form.addEventListener('submit', (event) => {
  event.preventDefault()
  void runQuery()
})

wireSegmentSlider(el.segSlider, el.segReadout, (segLenM) => {
  state.setSegmentLen(segLenM)
  void runQuery()
})

el.columns.addEventListener('change', () => {
  state.imageColumns = Math.max(1, Number(el.columns.value))
  strip.window = state.imageColumns
})

el.sideFilter.addEventListener('change', () => {
  state.imageSide = (el.sideFilter.value || null) as Side | null
})

void boot()
