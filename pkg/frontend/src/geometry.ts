// Box drawing math. Stored bounds are [x0, y0, x1, y1] in image pixels; the
// canvas only scales for display, so persisted coordinates are never lossy.

export interface Bounds {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export interface RulerBounds {
  width: number;
  height: number;
}

/** Normalize a drag gesture (any corner order) into an ordered box. */
export function boxFromDrag(
  ax: number,
  ay: number,
  bx: number,
  by: number,
): Bounds {
  return {
    x0: Math.min(ax, bx),
    y0: Math.min(ay, by),
    x1: Math.max(ax, bx),
    y1: Math.max(ay, by),
  };
}

/** Clamp a box into the image ruler; degenerate boxes stay degenerate. */
export function clampToRuler(box: Bounds, ruler: RulerBounds): Bounds {
  const clampX = (v: number) => Math.min(Math.max(v, 0), ruler.width);
  const clampY = (v: number) => Math.min(Math.max(v, 0), ruler.height);
  return {
    x0: clampX(box.x0),
    y0: clampY(box.y0),
    x1: clampX(box.x1),
    y1: clampY(box.y1),
  };
}

/** Display pixels -> image pixels, rounded to the integer grid. */
export function toImageCoords(
  viewX: number,
  viewY: number,
  scale: number,
): [number, number] {
  return [Math.round(viewX / scale), Math.round(viewY / scale)];
}

export function boundsArray(box: Bounds): [number, number, number, number] {
  return [box.x0, box.y0, box.x1, box.y1];
}

export function fromArray(bounds: number[]): Bounds {
  return { x0: bounds[0], y0: bounds[1], x1: bounds[2], y1: bounds[3] };
}

export function isEmpty(box: Bounds): boolean {
  return box.x0 >= box.x1 || box.y0 >= box.y1;
}
