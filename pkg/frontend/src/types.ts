// API payload shapes, mirroring the server's published JSON schemas.
// Every number the UI displays comes from these payloads untouched.

export interface LatLon {
  lat: number
  lon: number
}

export interface RegionInfo {
  id: string
  sample_count: number
  bbox: [number, number, number, number] | null
  patterns: number
}

export interface Pattern {
  id: number
  vector: number[]
  pattern_image: number
  name: string
  color: string
  member_count: number
  samples: number[]
}

export interface PatternCatalog {
  region: string
  patterns: Pattern[]
  provenance: Record<string, unknown>
}

export interface Distribution {
  fractions: Record<string, number>
  length_m: number
  sample_count: number
}

export interface Segment {
  start_m: number
  end_m: number
  dominant: number | null
  color: string
  counts: Record<string, number>
  geometry: [number, number][]
}

export interface Trajectory {
  sample_count: number
  segments: Segment[]
  distribution: Distribution
}

export interface Route {
  id: string
  index: number
  length_m: number
  geometry: [number, number][]
  legs: Record<string, unknown>[]
  trajectories: { L: Trajectory; R: Trajectory }
}

export interface RouteSet {
  query: {
    region: string
    origin: LatLon
    destination: LatLon
    seg_len_m: number
  }
  routes: Route[]
}

export interface ImageSample {
  id: number
  lat: number
  lon: number
  view_angle_deg: number
  distance_m: number
  pattern: number
  image: string | null
}

export interface ImageStripPayload {
  route: string
  side: Side
  at_m: number
  window: number
  samples: ImageSample[]
}

export type Side = 'L' | 'R'

export interface TrajectoryRef {
  routeId: string
  routeIndex: number
  side: Side
}

export const trajectoryKey = (ref: TrajectoryRef) => `${ref.routeId}/${ref.side}`
export const trajectoryLabel = (ref: TrajectoryRef) => `Route ${ref.routeIndex}${ref.side}`
