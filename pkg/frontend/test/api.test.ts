import { describe, expect, it } from "vitest";
import { ApiClient, ApiRequestError } from "../src/api.js";

interface Call {
  url: string;
  method: string;
  body: unknown;
}

function makeClient(reply: (url: string) => { status: number; body: unknown }) {
  const calls: Call[] = [];
  const client = new ApiClient("", async (url, init) => {
    calls.push({
      url,
      method: init?.method ?? "GET",
      body: init?.body ? JSON.parse(init.body as string) : null,
    });
    const { status, body } = reply(url);
    return new Response(JSON.stringify(body), {
      status,
      headers: { "content-type": "application/json" },
    });
  });
  return { client, calls };
}

const OK = () => ({ status: 200, body: { ok: true } });

describe("ApiClient", () => {
  it("posts selection bodies with mode and revision", async () => {
    const { client, calls } = makeClient(OK);
    await client.postSelection(
      "s1",
      { source: "rect", payload: { x0: 0, y0: 1, x1: 2, y1: 3, space: "image" } },
      "union",
      7,
    );
    expect(calls).toHaveLength(1);
    expect(calls[0].url).toBe("/sessions/s1/selection");
    expect(calls[0].method).toBe("POST");
    expect(calls[0].body).toEqual({
      source: "rect",
      payload: { x0: 0, y0: 1, x1: 2, y1: 3, space: "image" },
      mode: "union",
      revision: 7,
    });
  });

  it("omits the revision tag when none is given", async () => {
    const { client, calls } = makeClient(OK);
    await client.postSelection("s1", { source: "ids", payload: { ids: [1] } }, "replace");
    expect(calls[0].body).toEqual({ source: "ids", payload: { ids: [1] }, mode: "replace" });
  });

  it("builds table queries, dropping the filter when unset", async () => {
    const { client, calls } = makeClient(OK);
    await client.table("s1", "typeA", true, null, 0.2);
    await client.table("s1", "spot_id", false, "typeB", 0.5);
    expect(calls[0].url).toBe("/sessions/s1/table?sort_by=typeA&desc=true");
    expect(calls[1].url).toBe(
      "/sessions/s1/table?sort_by=spot_id&desc=false&filter_type=typeB&filter_min=0.5",
    );
  });

  it("caps bars requests", async () => {
    const { client, calls } = makeClient(OK);
    await client.bars("s1", 250);
    expect(calls[0].url).toBe("/sessions/s1/bars?cap=250");
  });

  it("raises ApiRequestError with the server's error envelope", async () => {
    const { client } = makeClient(() => ({
      status: 400,
      body: { error: "BadK", field: "k", message: "k must be >= 1" },
    }));
    const err = await client
      .cluster("d1", 0, 0)
      .then(() => null)
      .catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiRequestError);
    const apiErr = err as ApiRequestError;
    expect(apiErr.status).toBe(400);
    expect(apiErr.body.error).toBe("BadK");
    expect(apiErr.body.field).toBe("k");
  });

  it("cache-busts the mask URL by revision", () => {
    const client = new ApiClient("");
    expect(client.maskUrl("s1", 4)).toBe("/sessions/s1/mask.png?rev=4");
    expect(client.maskUrl("s1", 5)).not.toBe(client.maskUrl("s1", 4));
  });

  it("derives the events URL from the page location", () => {
    const client = new ApiClient("");
    expect(client.eventsUrl("s1", { protocol: "http:", host: "localhost:8080" })).toBe(
      "ws://localhost:8080/sessions/s1/events",
    );
    expect(client.eventsUrl("s1", { protocol: "https:", host: "app.example" })).toBe(
      "wss://app.example/sessions/s1/events",
    );
  });
});
