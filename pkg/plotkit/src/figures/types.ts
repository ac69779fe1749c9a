export interface Figure {
  width: number;
  height: number;
  /** geometry whose shape encodes data; covered by the checksum contract */
  data: string;
  /** titles, axes, legends; free to vary without breaking the checksum */
  labels: string;
}
