import type { RouteSet, Side, TrajectoryRef } from './types'
import { trajectoryKey } from './types'

export const DEFAULT_SEGMENT_LEN_M = 200
export const MIN_SEGMENT_LEN_M = 40

// At most two trajectories are highlighted for comparison; marker
// positions are tracked per highlighted trajectory and clamped to the
// route length.
export class UiState {
  region: string | null = null
  routeSet: RouteSet | null = null
  highlighted: TrajectoryRef[] = []
  markers = new Map<string, number>()
  segmentLenM = DEFAULT_SEGMENT_LEN_M
  imageSide: Side | null = null
  imageColumns = 4

  setRouteSet(routeSet: RouteSet | null) {
    this.routeSet = routeSet
    this.highlighted = []
    this.markers.clear()
  }

  routeLength(ref: TrajectoryRef): number {
    const route = this.routeSet?.routes.find((r) => r.id === ref.routeId)
    return route ? route.length_m : 0
  }

  toggleHighlight(ref: TrajectoryRef): boolean {
    const key = trajectoryKey(ref)
    const at = this.highlighted.findIndex((h) => trajectoryKey(h) === key)
    if (at >= 0) {
      this.highlighted.splice(at, 1)
      this.markers.delete(key)
      return false
    }
    if (this.highlighted.length >= 2) {
      const dropped = this.highlighted.shift()
      if (dropped) this.markers.delete(trajectoryKey(dropped))
    }
    this.highlighted.push(ref)
    this.markers.set(key, 0)
    return true
  }

  isHighlighted(routeId: string, side: Side): boolean {
    return this.highlighted.some((h) => h.routeId === routeId && h.side === side)
  }

  moveMarker(ref: TrajectoryRef, atM: number): number {
    const clamped = Math.min(Math.max(atM, 0), this.routeLength(ref))
    this.markers.set(trajectoryKey(ref), clamped)
    return clamped
  }

  markerAt(ref: TrajectoryRef): number {
    return this.markers.get(trajectoryKey(ref)) ?? 0
  }

  setSegmentLen(value: number): number {
    this.segmentLenM = Math.max(value, MIN_SEGMENT_LEN_M)
    return this.segmentLenM
  }

  // the image panel follows the highlighted trajectory's own side unless
  // the user picked a filter explicitly
  sideFor(ref: TrajectoryRef): Side {
    return this.imageSide ?? ref.side
  }
}
