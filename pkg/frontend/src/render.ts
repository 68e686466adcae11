/** Server-side SVG rendering through the echarts SSR mode. */

import * as echarts from "echarts";

import type { EChartsOption } from "./figures";

export function renderSvg(option: EChartsOption, width = 900, height = 560): string {
  const chart = echarts.init(null, null, { renderer: "svg", ssr: true, width, height });
  try {
    chart.setOption(option as echarts.EChartsOption);
    return chart.renderToSVGString();
  } finally {
    chart.dispose();
  }
}
