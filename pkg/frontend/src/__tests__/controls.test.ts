import { describe, expect, it, vi } from 'vitest'

import type { ApiClient } from '../api'
import { wirePatternEditor, wireSegmentSlider } from '../controls'

describe('segment length slider', () => {
  it('drag inputs update the readout; only the final change re-queries, once', () => {
    const slider = document.createElement('input')
    slider.type = 'range'
    slider.min = '40'
    slider.max = '1000'
    const readout = document.createElement('span')
    const onCommit = vi.fn()
    wireSegmentSlider(slider, readout, onCommit)

    for (const value of ['120', '160', '200', '240']) {
      slider.value = value
      slider.dispatchEvent(new Event('input'))
    }
    expect(onCommit).not.toHaveBeenCalled()
    expect(readout.textContent).toBe('240 m')

    slider.dispatchEvent(new Event('change'))
    expect(onCommit).toHaveBeenCalledTimes(1)
    expect(onCommit).toHaveBeenCalledWith(240)
  })
})

describe('pattern editor', () => {
  function card() {
    const node = document.createElement('article')
    node.innerHTML = `
      <input name="pattern-name" value="VaPattern 1" />
      <input name="pattern-color" value="#E69F00" />`
    return node
  }

  it('submits a rename and reflects the server echo', async () => {
    const updatePattern = vi.fn(async () => ({ id: 0, name: 'Ordinary City Pattern' }))
    const onUpdated = vi.fn()
    const node = card()
    wirePatternEditor(node, { updatePattern } as unknown as ApiClient, 0, {
      onUpdated,
      onError: vi.fn(),
    })
    const input = node.querySelector<HTMLInputElement>('input[name="pattern-name"]')!
    input.value = 'Ordinary City Pattern'
    input.dispatchEvent(new Event('change'))
    expect(updatePattern).toHaveBeenCalledWith(0, { name: 'Ordinary City Pattern' })
    await vi.waitFor(() =>
      expect(onUpdated).toHaveBeenCalledWith({ id: 0, name: 'Ordinary City Pattern' }),
    )
  })

  it('reports a duplicate-color rejection instead of applying it', async () => {
    const updatePattern = vi.fn(async () => {
      throw new Error('color #56B4E9 already used by pattern 1')
    })
    const onError = vi.fn()
    const node = card()
    wirePatternEditor(node, { updatePattern } as unknown as ApiClient, 0, {
      onUpdated: vi.fn(),
      onError,
    })
    const input = node.querySelector<HTMLInputElement>('input[name="pattern-color"]')!
    input.value = '#56b4e9'
    input.dispatchEvent(new Event('change'))
    expect(updatePattern).toHaveBeenCalledWith(0, { color: '#56B4E9' })
    await vi.waitFor(() => expect(onError).toHaveBeenCalled())
  })
})
