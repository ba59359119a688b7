import { describe, expect, it } from 'vitest'

import { NEUTRAL_COLOR, buildMapLayers, renderMap } from '../map'
import { UiState } from '../state'
import { catalogFixture, routeSetFixture } from './fixtures'

function highlightedState(routeSet = routeSetFixture()) {
  const state = new UiState()
  state.setRouteSet(routeSet)
  state.toggleHighlight({ routeId: routeSet.routes[0].id, routeIndex: 1, side: 'L' })
  return state
}

describe('map layers', () => {
  it('five segments of patterns [1,1,2,3,1] become five styled sublines in catalog colors', () => {
    const catalog = catalogFixture()
    const state = highlightedState()
    const model = buildMapLayers(routeSetFixture(), state, catalog)
    const layer = model.layers.find((l) => l.ref.side === 'L' && l.ref.routeIndex === 1)!
    expect(layer.highlighted).toBe(true)
    expect(layer.lines).toHaveLength(5)
    const colorOf = (id: number) => catalog.patterns.find((p) => p.id === id)!.color
    expect(layer.lines.map((l) => l.color)).toEqual(
      [1, 1, 2, 3, 1].map(colorOf),
    )
  })

  it('zero highlighted trajectories renders everything gray', () => {
    const state = new UiState()
    state.setRouteSet(routeSetFixture())
    const model = buildMapLayers(routeSetFixture(), state, catalogFixture())
    for (const layer of model.layers) {
      expect(layer.highlighted).toBe(false)
      expect(layer.lines).toHaveLength(1)
      expect(layer.lines[0].color).toBe(NEUTRAL_COLOR)
    }
  })

  it('a recolored catalog restyles without a new route set', () => {
    const catalog = catalogFixture()
    const routeSet = routeSetFixture()
    const state = highlightedState(routeSet)
    const before = buildMapLayers(routeSet, state, catalog)
    // pattern 1 recolored via the API; same route payload object
    catalog.patterns[1].color = '#112233'
    const after = buildMapLayers(routeSet, state, catalog)
    const layer = (m: ReturnType<typeof buildMapLayers>) =>
      m.layers.find((l) => l.ref.side === 'L' && l.ref.routeIndex === 1)!
    expect(layer(before).lines[0].color).toBe('#56B4E9')
    expect(layer(after).lines[0].color).toBe('#112233')
  })

  it('unknown pattern ids produce a badge, not a crash', () => {
    const routeSet = routeSetFixture()
    routeSet.routes[0].trajectories.L.segments[0].dominant = 42
    const model = buildMapLayers(routeSet, highlightedState(routeSet), catalogFixture())
    expect(model.badges.some((b) => b.includes('42'))).toBe(true)
    const layer = model.layers.find((l) => l.ref.side === 'L' && l.ref.routeIndex === 1)!
    expect(layer.lines[0].color).toBe(NEUTRAL_COLOR)
  })

  it('start and end markers come from the first route geometry', () => {
    const routeSet = routeSetFixture()
    const model = buildMapLayers(routeSet, new UiState(), catalogFixture())
    expect(model.start).toEqual(routeSet.routes[0].geometry[0])
    expect(model.end).toEqual(routeSet.routes[0].geometry.at(-1))
  })

  it('renderMap draws one group per trajectory plus S/E markers', () => {
    const routeSet = routeSetFixture()
    const state = highlightedState(routeSet)
    const svg = document.createElementNS('http://www.w3.org/2000/svg', 'svg') as SVGSVGElement
    renderMap(svg, buildMapLayers(routeSet, state, catalogFixture()), {
      width: 640,
      height: 480,
      pad: 20,
    })
    expect(svg.querySelectorAll('g[data-trajectory]')).toHaveLength(4)
    expect(svg.querySelectorAll('g.endpoint')).toHaveLength(2)
    const highlighted = svg.querySelector('g[data-highlighted="true"]')!
    expect(highlighted.querySelectorAll('polyline')).toHaveLength(5)
  })
})
