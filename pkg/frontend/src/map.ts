import { fitProjection, type Viewport } from './projection'
import type { PatternCatalog, RouteSet, Side, TrajectoryRef } from './types'
import type { UiState } from './state'

export const NEUTRAL_COLOR = '#B8B8B8'

export interface StyledLine {
  points: [number, number][]
  color: string
  width: number
}

export interface TrajectoryLayer {
  ref: TrajectoryRef
  highlighted: boolean
  lines: StyledLine[]
}

export interface MapModel {
  layers: TrajectoryLayer[]
  badges: string[]
  start: [number, number] | null
  end: [number, number] | null
}

// Pattern colors are looked up in the catalog at build time, so a recolor
// only needs a rebuild with the new catalog - no route re-query.
export function buildMapLayers(
  routeSet: RouteSet,
  state: UiState,
  catalog: PatternCatalog,
): MapModel {
  const colorById = new Map<number, string>()
  for (const pattern of catalog.patterns) colorById.set(pattern.id, pattern.color)

  const badges: string[] = []
  const layers: TrajectoryLayer[] = []
  for (const route of routeSet.routes) {
    for (const side of ['L', 'R'] as Side[]) {
      const ref: TrajectoryRef = { routeId: route.id, routeIndex: route.index, side }
      const highlighted = state.isHighlighted(route.id, side)
      if (!highlighted) {
        layers.push({
          ref,
          highlighted,
          lines: [{ points: route.geometry, color: NEUTRAL_COLOR, width: 2 }],
        })
        continue
      }
      const lines: StyledLine[] = []
      for (const segment of route.trajectories[side].segments) {
        let color = NEUTRAL_COLOR
        if (segment.dominant !== null) {
          const known = colorById.get(segment.dominant)
          if (known === undefined) {
            badges.push(`unknown pattern id ${segment.dominant} on route ${route.index}${side}`)
          } else {
            color = known
          }
        }
        lines.push({ points: segment.geometry, color, width: 5 })
      }
      layers.push({ ref, highlighted, lines })
    }
  }

  const first = routeSet.routes[0]
  return {
    layers,
    badges,
    start: first ? first.geometry[0] : null,
    end: first ? first.geometry[first.geometry.length - 1] : null,
  }
}

const SVG_NS = 'http://www.w3.org/2000/svg'

function sideOffset(side: Side): number {
  return side === 'L' ? -3 : 3
}

export function renderMap(svg: SVGSVGElement, model: MapModel, view: Viewport): void {
  svg.innerHTML = ''
  const allPoints = model.layers.flatMap((layer) => layer.lines.flatMap((line) => line.points))
  const proj = fitProjection(allPoints, view)

  const sorted = [...model.layers].sort((a, b) => Number(a.highlighted) - Number(b.highlighted))
  for (const layer of sorted) {
    const group = document.createElementNS(SVG_NS, 'g')
    group.setAttribute('data-trajectory', `${layer.ref.routeId}/${layer.ref.side}`)
    group.setAttribute('data-highlighted', String(layer.highlighted))
    const offset = sideOffset(layer.ref.side)
    for (const line of layer.lines) {
      const poly = document.createElementNS(SVG_NS, 'polyline')
      const coords = line.points
        .map(([lat, lon]) => offsetPoint(proj.x(lon), proj.y(lat), line.points, proj, offset))
        .map(([x, y]) => `${x.toFixed(1)},${y.toFixed(1)}`)
        .join(' ')
      poly.setAttribute('points', coords)
      poly.setAttribute('fill', 'none')
      poly.setAttribute('stroke', line.color)
      poly.setAttribute('stroke-width', String(line.width))
      poly.setAttribute('stroke-linecap', 'round')
      group.appendChild(poly)
    }
    svg.appendChild(group)
  }

  if (model.start && model.end) {
    svg.appendChild(endpointMarker(proj.x(model.start[1]), proj.y(model.start[0]), 'S'))
    svg.appendChild(endpointMarker(proj.x(model.end[1]), proj.y(model.end[0]), 'E'))
  }
}

// crude perpendicular shift so the L and R trajectories read as a pair
function offsetPoint(
  x: number,
  y: number,
  points: [number, number][],
  proj: { x(lon: number): number; y(lat: number): number },
  offset: number,
): [number, number] {
  if (points.length < 2 || offset === 0) return [x, y]
  const [aLat, aLon] = points[0]
  const [bLat, bLon] = points[points.length - 1]
  const dx = proj.x(bLon) - proj.x(aLon)
  const dy = proj.y(bLat) - proj.y(aLat)
  const len = Math.hypot(dx, dy) || 1
  return [x - (dy / len) * offset, y + (dx / len) * offset]
}

function endpointMarker(x: number, y: number, label: 'S' | 'E'): SVGGElement {
  const group = document.createElementNS(SVG_NS, 'g')
  group.setAttribute('class', 'endpoint')
  const circle = document.createElementNS(SVG_NS, 'circle')
  circle.setAttribute('cx', String(x))
  circle.setAttribute('cy', String(y))
  circle.setAttribute('r', '9')
  circle.setAttribute('fill', label === 'S' ? '#2E7D32' : '#C62828')
  const text = document.createElementNS(SVG_NS, 'text')
  text.setAttribute('x', String(x))
  text.setAttribute('y', String(y + 4))
  text.setAttribute('text-anchor', 'middle')
  text.setAttribute('fill', '#FFFFFF')
  text.setAttribute('font-size', '11')
  text.textContent = label
  group.append(circle, text)
  return group
}
