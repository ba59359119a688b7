import type { Distribution, Pattern, PatternCatalog, TrajectoryRef } from './types'
import { trajectoryLabel } from './types'

export const RADAR_AXES = ['Road', 'Sidewalk', 'Building', 'Vegetation', 'Terrain', 'Sky']

export interface RadarModel {
  axes: string[]
  // payload numbers, untouched; rendering scales them but never rewrites them
  values: number[]
  points: [number, number][]
}

export interface PatternCard {
  id: number
  name: string
  color: string
  memberCount: number
  patternImage: number
  sampleImages: number[]
  radar: RadarModel
}

export interface BarGroup {
  patternId: number
  patternName: string
  color: string
  // one entry per compared trajectory, value = payload fraction exactly
  values: { label: string; value: number }[]
}

export interface ComparisonModel {
  trajectories: { label: string; lengthM: number; sampleCount: number }[]
  groups: BarGroup[]
}

export function radarModel(values: number[], radius = 60, center = 70): RadarModel {
  const points = values.map((value, i) => {
    const angle = -Math.PI / 2 + (2 * Math.PI * i) / values.length
    const r = Math.max(0, Math.min(1, value)) * radius
    return [center + r * Math.cos(angle), center + r * Math.sin(angle)] as [number, number]
  })
  return { axes: RADAR_AXES.slice(0, values.length), values: [...values], points }
}

export function buildPatternCards(catalog: PatternCatalog): PatternCard[] {
  return catalog.patterns.map((pattern: Pattern) => ({
    id: pattern.id,
    name: pattern.name,
    color: pattern.color,
    memberCount: pattern.member_count,
    patternImage: pattern.pattern_image,
    sampleImages: [...pattern.samples],
    radar: radarModel(pattern.vector),
  }))
}

// Grouped bars (one group per pattern, one bar per highlighted trajectory);
// the bar values are the distribution fractions verbatim.
export function buildComparison(
  pairs: { ref: TrajectoryRef; distribution: Distribution }[],
  catalog: PatternCatalog,
): ComparisonModel {
  const nameById = new Map(catalog.patterns.map((p) => [p.id, p.name]))
  const colorById = new Map(catalog.patterns.map((p) => [p.id, p.color]))
  const ids = new Set<number>()
  for (const { distribution } of pairs) {
    for (const key of Object.keys(distribution.fractions)) ids.add(Number(key))
  }
  const groups: BarGroup[] = [...ids]
    .sort((a, b) => a - b)
    .map((id) => ({
      patternId: id,
      patternName: nameById.get(id) ?? `pattern ${id}`,
      color: colorById.get(id) ?? '#B8B8B8',
      values: pairs.map(({ ref, distribution }) => ({
        label: trajectoryLabel(ref),
        value: distribution.fractions[String(id)] ?? 0,
      })),
    }))
  return {
    trajectories: pairs.map(({ ref, distribution }) => ({
      label: trajectoryLabel(ref),
      lengthM: distribution.length_m,
      sampleCount: distribution.sample_count,
    })),
    groups,
  }
}

// -- thin DOM renderers -------------------------------------------------------

const SVG_NS = 'http://www.w3.org/2000/svg'

export function renderRadar(model: RadarModel, size = 140): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, 'svg')
  svg.setAttribute('viewBox', `0 0 ${size} ${size}`)
  svg.setAttribute('class', 'radar')
  const center = size / 2
  for (let ring = 1; ring <= 3; ring++) {
    const circle = document.createElementNS(SVG_NS, 'circle')
    circle.setAttribute('cx', String(center))
    circle.setAttribute('cy', String(center))
    circle.setAttribute('r', String((60 * ring) / 3))
    circle.setAttribute('fill', 'none')
    circle.setAttribute('stroke', '#DDD')
    svg.appendChild(circle)
  }
  const polygon = document.createElementNS(SVG_NS, 'polygon')
  polygon.setAttribute(
    'points',
    model.points.map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`).join(' '),
  )
  polygon.setAttribute('fill', 'rgba(86, 180, 233, 0.35)')
  polygon.setAttribute('stroke', '#5578A0')
  svg.appendChild(polygon)
  model.axes.forEach((axis, i) => {
    const angle = -Math.PI / 2 + (2 * Math.PI * i) / model.axes.length
    const text = document.createElementNS(SVG_NS, 'text')
    text.setAttribute('x', String(center + 66 * Math.cos(angle)))
    text.setAttribute('y', String(center + 66 * Math.sin(angle)))
    text.setAttribute('text-anchor', 'middle')
    text.setAttribute('font-size', '8')
    text.setAttribute('data-value', String(model.values[i]))
    text.textContent = axis
    svg.appendChild(text)
  })
  return svg
}

export function renderComparison(container: HTMLElement, model: ComparisonModel): void {
  container.innerHTML = ''
  const header = document.createElement('div')
  header.className = 'comparison-header'
  for (const traj of model.trajectories) {
    const item = document.createElement('span')
    item.textContent = `${traj.label}: ${traj.lengthM.toFixed(0)} m, ${traj.sampleCount} images`
    header.appendChild(item)
  }
  container.appendChild(header)

  for (const group of model.groups) {
    const row = document.createElement('div')
    row.className = 'bar-group'
    const label = document.createElement('span')
    label.className = 'bar-label'
    label.textContent = group.patternName
    row.appendChild(label)
    for (const bar of group.values) {
      const cell = document.createElement('div')
      cell.className = 'bar'
      cell.title = `${bar.label}: ${(bar.value * 100).toFixed(1)}%`
      cell.setAttribute('data-value', String(bar.value))
      const fill = document.createElement('div')
      fill.className = 'bar-fill'
      fill.style.width = `${bar.value * 100}%`
      fill.style.backgroundColor = group.color
      cell.appendChild(fill)
      row.appendChild(cell)
    }
    container.appendChild(row)
  }
}
