import type { ApiClient } from './api'
import type { Pattern } from './types'

// The slider fires a storm of input events while dragging; only the final
// change event re-queries, with the new segment length, exactly once.
export function wireSegmentSlider(
  slider: HTMLInputElement,
  readout: HTMLElement,
  onCommit: (segLenM: number) => void,
): void {
  slider.addEventListener('input', () => {
    readout.textContent = `${slider.value} m`
  })
  slider.addEventListener('change', () => {
    readout.textContent = `${slider.value} m`
    onCommit(Number(slider.value))
  })
}

export interface PatternEditCallbacks {
  onUpdated: (pattern: Pattern) => void
  onError: (message: string) => void
}

export function wirePatternEditor(
  card: HTMLElement,
  api: ApiClient,
  patternId: number,
  callbacks: PatternEditCallbacks,
): void {
  const nameInput = card.querySelector<HTMLInputElement>('input[name="pattern-name"]')
  const colorInput = card.querySelector<HTMLInputElement>('input[name="pattern-color"]')

  const submit = (patch: { name?: string; color?: string }) => {
    api
      .updatePattern(patternId, patch)
      .then((echo) => callbacks.onUpdated(echo as unknown as Pattern))
      .catch((err) => callbacks.onError(err instanceof Error ? err.message : String(err)))
  }

  nameInput?.addEventListener('change', () => {
    if (nameInput.value.trim()) submit({ name: nameInput.value.trim() })
  })
  colorInput?.addEventListener('change', () => {
    submit({ color: colorInput.value.toUpperCase() })
  })
}
