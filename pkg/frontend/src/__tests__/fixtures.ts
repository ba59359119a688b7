import type { ImageStripPayload, PatternCatalog, RouteSet, Segment } from '../types'

export function catalogFixture(): PatternCatalog {
  return {
    region: 'fixture',
    patterns: [
      { id: 0, vector: [0.31, 0.03, 0.18, 0.21, 0.05, 0.22], pattern_image: 4, name: 'Ordinary City Pattern', color: '#E69F00', member_count: 120, samples: [4, 9, 13] },
      { id: 1, vector: [0.05, 0.01, 0.71, 0.08, 0.0, 0.02], pattern_image: 31, name: 'Infrastructure Pattern', color: '#56B4E9', member_count: 80, samples: [31, 7] },
      { id: 2, vector: [0.1, 0.02, 0.05, 0.6, 0.1, 0.13], pattern_image: 55, name: 'Greenery Pattern', color: '#009E73', member_count: 95, samples: [55] },
      { id: 3, vector: [0, 0, 0, 0, 0, 1], pattern_image: 77, name: 'Open View Pattern', color: '#F0E442', member_count: 44, samples: [77, 78] },
    ],
    provenance: { method: 'kmeans', k: 4 },
  }
}

function segment(startM: number, endM: number, dominant: number | null, color: string): Segment {
  const lat = 41 + startM * 1e-5
  return {
    start_m: startM,
    end_m: endM,
    dominant,
    color,
    counts: dominant === null ? {} : { [String(dominant)]: 3 },
    geometry: [
      [lat, -82],
      [lat + 0.001, -82],
    ],
  }
}

export function routeSetFixture(): RouteSet {
  const segPatterns = [1, 1, 2, 3, 1]
  const segments = segPatterns.map((p, i) =>
    segment(i * 200, (i + 1) * 200, p, ['#56B4E9', '#56B4E9', '#009E73', '#F0E442', '#56B4E9'][i]),
  )
  const distributionL = { fractions: { '1': 0.6, '2': 0.2, '3': 0.2 }, length_m: 1000, sample_count: 50 }
  const distributionR = { fractions: { '0': 0.5, '2': 0.5 }, length_m: 1000, sample_count: 48 }
  const geometry: [number, number][] = [
    [41.0, -82.0],
    [41.009, -82.0],
  ]
  return {
    query: {
      region: 'fixture',
      origin: { lat: 41.0, lon: -82.0 },
      destination: { lat: 41.009, lon: -82.0 },
      seg_len_m: 200,
    },
    routes: [
      {
        id: 'r1-fixture0',
        index: 1,
        length_m: 1000,
        geometry,
        legs: [],
        trajectories: {
          L: { sample_count: 50, segments, distribution: distributionL },
          R: { sample_count: 48, segments: segments.slice(0, 3), distribution: distributionR },
        },
      },
      {
        id: 'r2-fixture0',
        index: 2,
        length_m: 1000,
        geometry: geometry.map(([lat, lon]) => [lat, lon - 0.002]) as [number, number][],
        legs: [],
        trajectories: {
          L: { sample_count: 40, segments: segments.slice(0, 2), distribution: distributionL },
          R: { sample_count: 40, segments: segments.slice(0, 2), distribution: distributionR },
        },
      },
    ],
  }
}

export function imagesFixture(window = 4): ImageStripPayload {
  return {
    route: 'r1-fixture0',
    side: 'L',
    at_m: 120,
    window,
    samples: Array.from({ length: window }, (_, i) => ({
      id: 10 + 2 * i,
      lat: 41.0 + i * 1e-4,
      lon: -82.0,
      view_angle_deg: 270,
      distance_m: 90 + 20 * i,
      pattern: 1,
      image: i % 2 === 0 ? `images/${10 + 2 * i}.jpg` : null,
    })),
  }
}
