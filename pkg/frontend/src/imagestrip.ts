import type { ApiClient } from './api'
import type { ImageStripPayload, TrajectoryRef } from './types'
import { trajectoryLabel } from './types'

export const DRAG_DEBOUNCE_MS = 150

// Marker drags arrive far faster than the API should be hit; requests are
// debounced and a stale in-flight response never overwrites a newer one.
export class ImageStrip {
  private timer: ReturnType<typeof setTimeout> | null = null
  private requestSeq = 0
  lastPayload: ImageStripPayload | null = null
  lastError: string | null = null

  constructor(
    private api: ApiClient,
    private container: HTMLElement,
    public window: number = 4,
  ) {}

  onMarkerDrag(ref: TrajectoryRef, atM: number): void {
    if (this.timer !== null) clearTimeout(this.timer)
    this.timer = setTimeout(() => {
      this.timer = null
      void this.fetchNow(ref, atM)
    }, DRAG_DEBOUNCE_MS)
  }

  async fetchNow(ref: TrajectoryRef, atM: number): Promise<void> {
    const seq = ++this.requestSeq
    try {
      const payload = await this.api.getImages(ref.routeId, ref.side, atM, this.window)
      if (seq !== this.requestSeq) return // superseded
      this.lastPayload = payload
      this.lastError = null
      this.render(ref)
    } catch (err) {
      if (seq !== this.requestSeq) return
      // keep the stale strip; surface a retry affordance
      this.lastError = err instanceof Error ? err.message : String(err)
      this.renderError(ref, atM)
    }
  }

  render(ref: TrajectoryRef): void {
    this.container.innerHTML = ''
    const payload = this.lastPayload
    if (!payload) return
    const caption = document.createElement('div')
    caption.className = 'strip-caption'
    caption.textContent = `${trajectoryLabel(ref)} @ ${payload.at_m.toFixed(0)} m`
    this.container.appendChild(caption)
    const grid = document.createElement('div')
    grid.className = 'strip-grid'
    grid.style.gridTemplateColumns = `repeat(${this.window}, 1fr)`
    for (const sample of payload.samples) {
      const cell = document.createElement('figure')
      cell.className = 'strip-cell'
      cell.setAttribute('data-sample', String(sample.id))
      cell.setAttribute('data-pattern', String(sample.pattern))
      if (sample.image) {
        const img = document.createElement('img')
        img.src = sample.image
        img.alt = `sample ${sample.id}`
        cell.appendChild(img)
      } else {
        const placeholder = document.createElement('div')
        placeholder.className = 'strip-placeholder'
        placeholder.textContent = `#${sample.id}`
        cell.appendChild(placeholder)
      }
      const meta = document.createElement('figcaption')
      meta.textContent = `${sample.distance_m.toFixed(0)} m`
      cell.appendChild(meta)
      grid.appendChild(cell)
    }
    this.container.appendChild(grid)
  }

  private renderError(ref: TrajectoryRef, atM: number): void {
    let bar = this.container.querySelector<HTMLElement>('.strip-error')
    if (!bar) {
      bar = document.createElement('div')
      bar.className = 'strip-error'
      this.container.prepend(bar)
    }
    bar.innerHTML = ''
    bar.textContent = `image lookup failed: ${this.lastError} `
    const retry = document.createElement('button')
    retry.textContent = 'retry'
    retry.addEventListener('click', () => void this.fetchNow(ref, atM))
    bar.appendChild(retry)
  }
}
