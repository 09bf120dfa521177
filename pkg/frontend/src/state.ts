/** UI state machine. `apply` is a pure reducer: it folds one event into the
 * view state and returns the messages to send, so every protocol rule is
 * testable without a DOM or a socket.
 */

import type {
  Bundle,
  MinimapState,
  OutgoingMsg,
  ServerMsg,
  SignpostState,
  Vec2,
} from "./types.js";

export interface ChatEntry {
  who: "visitor" | "guide" | "system";
  text: string;
}

export interface ViewState {
  connection: "connecting" | "open" | "closed";
  session: string | null;
  speed: number;
  lastSeq: number; // highest server seq accepted; regressions are dropped
  guide: Vec2 | null;
  visitor: Vec2 | null;
  walking: boolean;
  minimap: MinimapState | null;
  signpost: SignpostState | null;
  bundle: Bundle | null; // the single active combo
  bundleAt: number; // ms timestamp of the active bundle (highlight reveal clock)
  chat: ChatEntry[];
  echo: string | null; // submitted utterance awaiting feedback
  banner: string | null;
  nextSeq: number; // client-side outgoing counter
}

export type UiEvent =
  | { kind: "wire"; msg: ServerMsg; at: number }
  | { kind: "submit"; text: string; at: number }
  | { kind: "select"; artwork: string; at: number }
  | { kind: "socket"; status: "connecting" | "open" | "closed"; at: number };

export interface Step {
  state: ViewState;
  send: OutgoingMsg[];
}

export function initialState(): ViewState {
  return {
    connection: "connecting",
    session: null,
    speed: 0,
    lastSeq: 0,
    guide: null,
    visitor: null,
    walking: false,
    minimap: null,
    signpost: null,
    bundle: null,
    bundleAt: 0,
    chat: [],
    echo: null,
    banner: "connecting...",
    nextSeq: 1,
  };
}

export function apply(state: ViewState, event: UiEvent): Step {
  switch (event.kind) {
    case "socket":
      return { state: onSocket(state, event.status), send: [] };
    case "submit":
      return onSubmit(state, event.text);
    case "select":
      return onSelect(state, event.artwork);
    case "wire":
      return { state: onWire(state, event.msg, event.at), send: [] };
  }
}

function onSocket(state: ViewState, status: "connecting" | "open" | "closed"): ViewState {
  if (status === "closed") {
    return { ...state, connection: "closed", walking: false, banner: "connection lost, retrying..." };
  }
  if (status === "connecting") {
    return { ...state, connection: "connecting", banner: "connecting..." };
  }
  // a fresh socket starts a fresh seq stream
  return { ...state, connection: "open", lastSeq: 0 };
}

function onSubmit(state: ViewState, text: string): Step {
  const trimmed = text.trim();
  if (!trimmed || state.connection !== "open") {
    return { state, send: [] };
  }
  const msg: OutgoingMsg = { type: "utterance", seq: state.nextSeq, text: trimmed };
  return {
    state: {
      ...state,
      nextSeq: state.nextSeq + 1,
      echo: trimmed,
      chat: [...state.chat, { who: "visitor", text: trimmed }],
    },
    send: [msg],
  };
}

function onSelect(state: ViewState, artwork: string): Step {
  if (state.connection !== "open") {
    return { state, send: [] };
  }
  const msg: OutgoingMsg = { type: "select", seq: state.nextSeq, artwork };
  return {
    state: {
      ...state,
      nextSeq: state.nextSeq + 1,
      chat: [...state.chat, { who: "visitor", text: `(asks about ${artwork})` }],
    },
    send: [msg],
  };
}

function onWire(state: ViewState, msg: ServerMsg, at: number): ViewState {
  if (msg.seq <= state.lastSeq) {
    return state; // stale or replayed frame
  }
  const next = { ...state, lastSeq: msg.seq };
  switch (msg.type) {
    case "hello":
      return {
        ...next,
        session: msg.session,
        speed: msg.speed,
        guide: msg.spawn,
        visitor: msg.spawn,
        banner: null,
      };
    case "feedback":
      return {
        ...next,
        bundle: msg.bundle,
        bundleAt: at,
        echo: null,
        minimap: msg.bundle.minimap ?? null,
        signpost: msg.bundle.signpost ?? null,
        chat: [...next.chat, { who: "guide", text: msg.bundle.voice }],
      };
    case "pose":
      return {
        ...next,
        guide: msg.guide,
        visitor: msg.visitor,
        walking: msg.walking,
        minimap: msg.minimap ?? null,
        signpost: msg.signpost ?? null,
      };
    case "arrival":
      return {
        ...next,
        walking: false,
        minimap: null,
        signpost: null,
        chat: [...next.chat, { who: "system", text: `arrived at ${msg.artwork}` }],
      };
    case "error":
      if (msg.reason === "superseded") {
        return next; // replaced by a newer request; its feedback speaks instead
      }
      return {
        ...next,
        echo: msg.re === null ? next.echo : null,
        chat: [...next.chat, { who: "system", text: `error: ${msg.reason}` }],
      };
  }
}

/** Which panels the active bundle shows; render consumes only this. */
export function visiblePanels(state: ViewState): Set<string> {
  const panels = new Set<string>();
  const bundle = state.bundle;
  if (bundle) {
    if (bundle.text_window !== undefined) panels.add("text_window");
    if (bundle.highlights !== undefined) panels.add("highlights");
    if (bundle.virtual_screen !== undefined) panels.add("virtual_screen");
  }
  if (state.minimap?.visible) panels.add("minimap");
  if (state.signpost) panels.add("signpost");
  return panels;
}
