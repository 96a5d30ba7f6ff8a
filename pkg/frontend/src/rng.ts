// Deterministic left/right placement.
//
// Each pair's A/B sides are assigned to screen sides by a PRNG seeded from
// the session id, so a refresh reproduces the same layout while the
// participant still can't infer which side is which method.

export function hashStringToSeed(text: string): number {
  // FNV-1a, 32 bit
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193);
  }
  return hash >>> 0;
}

export function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** true when media A plays on the left for this pair. */
export function aOnLeft(sessionId: string, pairIndex: number): boolean {
  const rng = mulberry32(hashStringToSeed(`${sessionId}:${pairIndex}`));
  return rng() < 0.5;
}
