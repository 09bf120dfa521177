/** Wire protocol and museum document types, mirroring the server schema. */

export type Vec2 = [number, number];

export interface MinimapState {
  marker: Vec2;
  trail: Vec2[];
  visible: boolean;
}

export interface SignpostState {
  bearing: number; // radians, clockwise from +y ("north"), (-pi, pi]
  distance: number;
}

export interface AvatarState {
  pose: "walk" | "point" | "speak";
  target: string | null;
  face_visitor: boolean;
}

export interface Highlight {
  artwork: string;
  region: string;
  rect: [number, number, number, number]; // normalized on the canvas face
  color: string;
  reveal_at: number; // seconds after the bundle arrives
}

export type Combo = "C1" | "C2" | "C3" | "C4" | "C5";

export interface Bundle {
  combo: Combo;
  voice: string;
  avatar: AvatarState;
  echo: string;
  text_window?: string;
  highlights?: Highlight[];
  virtual_screen?: string[];
  minimap?: MinimapState;
  signpost?: SignpostState;
}

export interface HelloMsg {
  type: "hello";
  seq: number;
  session: string;
  spawn: Vec2;
  speed: number;
}

export interface FeedbackMsg {
  type: "feedback";
  seq: number;
  re: number | null;
  bundle: Bundle;
}

export interface PoseMsg {
  type: "pose";
  seq: number;
  guide: Vec2;
  visitor: Vec2;
  walking: boolean;
  minimap?: MinimapState;
  signpost?: SignpostState;
}

export interface ArrivalMsg {
  type: "arrival";
  seq: number;
  artwork: string;
}

export interface ErrorMsg {
  type: "error";
  seq: number;
  re: number | null;
  reason: string;
}

export type ServerMsg = HelloMsg | FeedbackMsg | PoseMsg | ArrivalMsg | ErrorMsg;

export interface OutgoingMsg {
  type: "utterance" | "select";
  seq: number;
  text?: string;
  artwork?: string;
}

export interface ArtworkRegion {
  name: string;
  note: string;
  rect: [number, number, number, number];
}

export interface ArtworkDoc {
  id: string;
  name: string;
  author: string;
  year: string;
  style: string;
  description: string;
  popularity: number;
  position: [number, number, number]; // x, hanging height, y
  facing: Vec2;
  regions: ArtworkRegion[];
}

export interface MuseumDoc {
  schema: number;
  bounds: { w: number; h: number };
  spawn: Vec2;
  obstacles: Vec2[][];
  artworks: ArtworkDoc[];
}

/** Plan-view position of an artwork (the document stores x, height, y). */
export function artworkXY(art: ArtworkDoc): Vec2 {
  return [art.position[0], art.position[2]];
}

/** Floor rectangle [x0, y0, w, h]; the museum is centered on the origin. */
export function floorRect(doc: MuseumDoc): [number, number, number, number] {
  return [-doc.bounds.w / 2, -doc.bounds.h / 2, doc.bounds.w, doc.bounds.h];
}
