import { describe, expect, it } from "vitest";

import { gatewayUrl } from "../src/net.js";
import { parseServerMessage } from "../src/protocol.js";

describe("gatewayUrl", () => {
  it("prefers the ws query parameter", () => {
    expect(gatewayUrl("?ws=ws://10.0.0.5:9000", "example.org")).toBe("ws://10.0.0.5:9000");
  });

  it("falls back to the page host on the default port", () => {
    expect(gatewayUrl("", "example.org")).toBe("ws://example.org:8765");
    expect(gatewayUrl("?other=1", "")).toBe("ws://127.0.0.1:8765");
  });
});

describe("parseServerMessage", () => {
  it("accepts frames and errors", () => {
    const f = parseServerMessage('{"type":"frame","t":1.0}');
    expect(f.type).toBe("frame");
    const e = parseServerMessage('{"type":"error","reason":"nope"}');
    expect(e.type).toBe("error");
  });

  it("rejects unknown message types", () => {
    expect(() => parseServerMessage('{"type":"mystery"}')).toThrow(/unexpected/);
  });
});
