// Equirectangular fit of route geometry into an SVG viewport. Purely
// presentational; no distances or analytics are derived from it.

export interface Viewport {
  width: number
  height: number
  pad: number
}

export interface Projection {
  x(lon: number): number
  y(lat: number): number
}

export function fitProjection(points: [number, number][], view: Viewport): Projection {
  let minLat = Infinity
  let maxLat = -Infinity
  let minLon = Infinity
  let maxLon = -Infinity
  for (const [lat, lon] of points) {
    minLat = Math.min(minLat, lat)
    maxLat = Math.max(maxLat, lat)
    minLon = Math.min(minLon, lon)
    maxLon = Math.max(maxLon, lon)
  }
  if (!isFinite(minLat)) {
    minLat = maxLat = 0
    minLon = maxLon = 0
  }
  const midLat = (minLat + maxLat) / 2
  const stretch = Math.cos((midLat * Math.PI) / 180)
  const spanLat = Math.max(maxLat - minLat, 1e-9)
  const spanLon = Math.max((maxLon - minLon) * stretch, 1e-9)
  const usableW = view.width - 2 * view.pad
  const usableH = view.height - 2 * view.pad
  const scale = Math.min(usableW / spanLon, usableH / spanLat)
  const offsetX = view.pad + (usableW - spanLon * scale) / 2
  const offsetY = view.pad + (usableH - spanLat * scale) / 2
  return {
    x: (lon) => offsetX + (lon - minLon) * stretch * scale,
    y: (lat) => offsetY + (maxLat - lat) * scale,
  }
}
