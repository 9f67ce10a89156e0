/**
 * Client side of the session protocol: line-delimited JSON request /
 * response pairs with exactly one request in flight at a time.
 *
 * The wire format is transport-independent here; the browser build plugs
 * in a WebSocket bridge, tests plug in an in-memory transport.
 */

export interface Request {
  verb: string;
  session?: string;
  args: Record<string, unknown>;
}

export interface OkResponse {
  ok: true;
  version: number;
  payload: Record<string, unknown>;
}

export interface ErrorResponse {
  ok: false;
  error: string;
}

export type Response = OkResponse | ErrorResponse;

/** One line out, one line back. */
export interface Transport {
  send(line: string): void;
  /** Register the receiver for incoming lines (called once). */
  onLine(handler: (line: string) => void): void;
  close(): void;
}

/** Frames chunked input into lines; transports deliver arbitrary chunks. */
export class LineFramer {
  private buffer = "";

  constructor(private readonly deliver: (line: string) => void) {}

  feed(chunk: string): void {
    this.buffer += chunk;
    for (;;) {
      const at = this.buffer.indexOf("\n");
      if (at < 0) return;
      const line = this.buffer.slice(0, at);
      this.buffer = this.buffer.slice(at + 1);
      if (line.trim().length > 0) this.deliver(line);
    }
  }
}

export class ProtocolError extends Error {}

/**
 * Sequential request/response client. A gesture is rejected while another
 * request is pending, mirroring the workbench rule that controls stay
 * disabled until the server answers.
 */
export class ServiceClient {
  private pending: ((response: Response) => void) | null = null;

  constructor(private readonly transport: Transport) {
    transport.onLine((line) => this.receive(line));
  }

  get busy(): boolean {
    return this.pending !== null;
  }

  call(verb: string, session?: string, args: Record<string, unknown> = {}): Promise<Response> {
    if (this.pending) {
      return Promise.reject(new ProtocolError("a request is already in flight"));
    }
    const request: Request = { verb, args };
    if (session !== undefined) request.session = session;
    return new Promise((resolve) => {
      this.pending = resolve;
      this.transport.send(JSON.stringify(request) + "\n");
    });
  }

  /** A call that must succeed; the error text is surfaced to the caller. */
  async expectOk(verb: string, session?: string, args: Record<string, unknown> = {}): Promise<OkResponse> {
    const response = await this.call(verb, session, args);
    if (!response.ok) throw new ProtocolError(response.error);
    return response;
  }

  private receive(line: string): void {
    const resolve = this.pending;
    if (!resolve) return; // unsolicited line: the protocol is request/response only
    this.pending = null;
    let parsed: Response;
    try {
      parsed = JSON.parse(line) as Response;
    } catch {
      parsed = { ok: false, error: `malformed response: ${line}` };
    }
    resolve(parsed);
  }

  close(): void {
    this.transport.close();
  }
}

/** Browser transport for a WebSocket endpoint bridging to the TCP service. */
export class WebSocketTransport implements Transport {
  private readonly framer: LineFramer;
  private handler: ((line: string) => void) | null = null;

  constructor(private readonly socket: WebSocket) {
    this.framer = new LineFramer((line) => this.handler?.(line));
    socket.addEventListener("message", (event) => {
      this.framer.feed(String(event.data));
    });
  }

  send(line: string): void {
    this.socket.send(line);
  }

  onLine(handler: (line: string) => void): void {
    this.handler = handler;
  }

  close(): void {
    this.socket.close();
  }
}
