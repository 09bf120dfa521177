/** DOM side panels: chat log, echo bubble, text window, virtual screen,
 * connection banner. Idempotent update from the current state.
 */

import type { ViewState } from "./state.js";
import type { MuseumDoc } from "./types.js";

export interface PanelRefs {
  banner: HTMLElement;
  chat: HTMLElement;
  echo: HTMLElement;
  textWindow: HTMLElement;
  virtualScreen: HTMLElement;
}

export function findPanels(root: Document | HTMLElement): PanelRefs {
  const get = (id: string): HTMLElement => {
    const el = root.querySelector<HTMLElement>(`#${id}`);
    if (!el) throw new Error(`missing panel element #${id}`);
    return el;
  };
  return {
    banner: get("banner"),
    chat: get("chat"),
    echo: get("echo"),
    textWindow: get("text-window"),
    virtualScreen: get("virtual-screen"),
  };
}

export function updatePanels(
  refs: PanelRefs,
  state: ViewState,
  museum: MuseumDoc | null,
  onSelect: (artworkId: string) => void,
): void {
  refs.banner.textContent = state.banner ?? "";
  refs.banner.style.display = state.banner ? "block" : "none";

  renderChat(refs.chat, state);

  refs.echo.textContent = state.echo ?? "";
  refs.echo.style.display = state.echo ? "block" : "none";

  const text = state.bundle?.text_window;
  refs.textWindow.textContent = text ?? "";
  refs.textWindow.style.display = text !== undefined ? "block" : "none";

  renderVirtualScreen(refs.virtualScreen, state, museum, onSelect);
}

function renderChat(el: HTMLElement, state: ViewState): void {
  const doc = el.ownerDocument;
  el.replaceChildren(
    ...state.chat.map((entry) => {
      const line = doc.createElement("div");
      line.className = `chat-line chat-${entry.who}`;
      line.textContent = entry.text;
      return line;
    }),
  );
  el.scrollTop = el.scrollHeight;
}

function renderVirtualScreen(
  el: HTMLElement,
  state: ViewState,
  museum: MuseumDoc | null,
  onSelect: (artworkId: string) => void,
): void {
  const ids = state.bundle?.virtual_screen;
  el.style.display = ids !== undefined ? "flex" : "none";
  const doc = el.ownerDocument;
  el.replaceChildren(
    ...(ids ?? []).map((id) => {
      const art = museum?.artworks.find((a) => a.id === id);
      const thumb = doc.createElement("button");
      thumb.className = "thumb";
      thumb.dataset.artwork = id;
      thumb.textContent = art ? art.name : id;
      thumb.title = art ? `${art.name} (${art.author})` : id;
      thumb.addEventListener("click", () => onSelect(id));
      return thumb;
    }),
  );
}
