// Concentric-ring layout for social networks: band 1 sits innermost, the
// outermost band holds the isolated resources (the ranking view).

import type { SocialJson } from "./api.js";

export interface RingNode {
  id: string;
  band: number;
  degree: number;
  weightedDegree: number;
  x: number;
  y: number;
}

export function ringLayout(
  net: SocialJson,
  width: number,
  height: number,
  bands = 5,
): RingNode[] {
  const cx = width / 2;
  const cy = height / 2;
  const maxRadius = Math.min(width, height) / 2 - 30;
  const byBand = new Map<number, typeof net.nodes>();
  for (const node of net.nodes) {
    const list = byBand.get(node.band) ?? [];
    list.push(node);
    byBand.set(node.band, list);
  }
  const out: RingNode[] = [];
  for (const [band, members] of byBand) {
    const radius = band === 1 && members.length === 1 ? 0 : (maxRadius * band) / bands;
    const sorted = [...members].sort((a, b) => a.id.localeCompare(b.id));
    sorted.forEach((node, i) => {
      const angle = (2 * Math.PI * i) / sorted.length - Math.PI / 2;
      out.push({
        id: node.id,
        band: node.band,
        degree: node.degree,
        weightedDegree: node.weighted_degree,
        x: cx + radius * Math.cos(angle),
        y: cy + radius * Math.sin(angle),
      });
    });
  }
  return out.sort((a, b) => a.id.localeCompare(b.id));
}
