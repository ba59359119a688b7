import type {
  ImageStripPayload,
  LatLon,
  PatternCatalog,
  RegionInfo,
  RouteSet,
  Side,
} from './types'

async function asJson<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let message = `${resp.status}`
    try {
      const body = await resp.json()
      if (body && typeof body.error === 'string') message = body.error
    } catch {
      // non-JSON error body; keep the status code
    }
    throw new Error(message)
  }
  return resp.json() as Promise<T>
}

export class ApiClient {
  constructor(private base: string = '') {}

  getRegions(): Promise<RegionInfo[]> {
    return fetch(`${this.base}/api/regions`).then((r) => asJson<RegionInfo[]>(r))
  }

  getPatterns(): Promise<PatternCatalog> {
    return fetch(`${this.base}/api/patterns`).then((r) => asJson<PatternCatalog>(r))
  }

  updatePattern(id: number, patch: { name?: string; color?: string }) {
    return fetch(`${this.base}/api/patterns/${id}`, {
      method: 'PUT',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(patch),
    }).then((r) => asJson<Record<string, unknown>>(r))
  }

  queryRoutes(body: {
    origin: [number, number]
    destination: [number, number]
    region?: string
    seg_len_m?: number
  }): Promise<RouteSet> {
    return fetch(`${this.base}/api/routes`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    }).then((r) => asJson<RouteSet>(r))
  }

  getImages(routeId: string, side: Side, atM: number, window: number): Promise<ImageStripPayload> {
    const params = new URLSearchParams({ at_m: String(atM), window: String(window) })
    return fetch(`${this.base}/api/routes/${routeId}/${side}/images?${params}`).then((r) =>
      asJson<ImageStripPayload>(r),
    )
  }
}

export type { LatLon }
