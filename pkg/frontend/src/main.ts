/** App bootstrap: fetch the museum, open the socket, run one render loop.
 * Socket events queue here and are folded into state once per frame.
 */

import { GuideSocket } from "./net.js";
import { findPanels, updatePanels } from "./panels.js";
import { draw } from "./render.js";
import { apply, initialState, type UiEvent, type ViewState } from "./state.js";
import type { MuseumDoc } from "./types.js";

async function boot(): Promise<void> {
  const canvas = document.querySelector<HTMLCanvasElement>("#floor")!;
  const ctx = canvas.getContext("2d")!;
  const panels = findPanels(document);
  const form = document.querySelector<HTMLFormElement>("#say")!;
  const input = document.querySelector<HTMLInputElement>("#say-text")!;
  const micButton = document.querySelector<HTMLButtonElement>("#mic")!;

  let museum: MuseumDoc | null = null;
  let state: ViewState = initialState();
  const queue: UiEvent[] = [];
  const enqueue = (event: UiEvent): void => {
    queue.push(event);
  };

  const wsProto = location.protocol === "https:" ? "wss:" : "ws:";
  const socket = new GuideSocket(`${wsProto}//${location.host}/session`, enqueue);

  fetch("/museum")
    .then((r) => r.json())
    .then((doc: MuseumDoc) => {
      museum = doc;
    })
    .catch(() => {
      enqueue({ kind: "socket", status: "closed", at: Date.now() });
    });

  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    enqueue({ kind: "submit", text: input.value, at: Date.now() });
    input.value = "";
  });

  setupSpeech(micButton, input);

  const frame = (): void => {
    let changed = queue.length > 0;
    while (queue.length > 0) {
      const step = apply(state, queue.shift()!);
      state = step.state;
      for (const msg of step.send) socket.send(msg);
    }
    sizeCanvas(canvas);
    if (museum) {
      draw(ctx, state, museum, canvas.width, canvas.height, Date.now());
    }
    if (changed || state.bundle?.highlights) {
      updatePanels(panels, state, museum, (artworkId) => {
        enqueue({ kind: "select", artwork: artworkId, at: Date.now() });
      });
    }
    requestAnimationFrame(frame);
  };
  requestAnimationFrame(frame);
}

function sizeCanvas(canvas: HTMLCanvasElement): void {
  const w = canvas.clientWidth;
  const h = canvas.clientHeight;
  if (canvas.width !== w || canvas.height !== h) {
    canvas.width = w;
    canvas.height = h;
  }
}

/** Optional dictation: browser speech recognition feeding the text box. */
function setupSpeech(button: HTMLButtonElement, input: HTMLInputElement): void {
  const Recognition =
    (window as never as Record<string, unknown>).SpeechRecognition ??
    (window as never as Record<string, unknown>).webkitSpeechRecognition;
  if (typeof Recognition !== "function") {
    button.style.display = "none";
    return;
  }
  button.addEventListener("click", () => {
    const rec = new (Recognition as new () => {
      lang: string;
      onresult: (ev: { results: { [i: number]: { [j: number]: { transcript: string } } } }) => void;
      start: () => void;
    })();
    rec.lang = "en-US";
    rec.onresult = (ev) => {
      input.value = ev.results[0][0].transcript;
    };
    rec.start();
  });
}

boot();
