export { parseCsv, readCsv, column, type Table } from "./csv.js";
export {
  render,
  blowupPrediction,
  pinchPrediction,
  halfWidthOf,
  referenceProfile,
  CONE_SLOPE,
  CONE_ANGLE_DEG,
  PINCH_RATE_CONSTANT,
  type FigureSpec,
  type SlopeFitSpec,
  type CollapseSpec,
  type ConePlateauSpec,
} from "./figures.js";
export { Figure, type Axis, type Scale } from "./svg.js";
