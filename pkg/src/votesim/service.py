"""Live session host.

Owns one stepping world per session. Commands arrive over a websocket
channel, are queued, and apply only between steps; subscribers receive
consistent post-step snapshots with per-connection throttling and
latest-wins delivery for slow readers. Simulation semantics are exactly the
core kernel's; the tick rate only schedules wall-clock stepping.
"""

from __future__ import annotations

import asyncio
import uuid
from collections import deque
from contextlib import asynccontextmanager
from dataclasses import replace
from enum import Enum
from typing import Any

from fastapi import FastAPI, Request, WebSocket, WebSocketDisconnect
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .core import SimParams, init_world, step, tally, trigger_scandal
from .scenario import ScenarioError, parse_candidates

SNAPSHOT_SCHEMA_VERSION = 1
DEFAULT_TICK_RATE = 10.0
VOTER_DOWNSAMPLE_LIMIT = 5000
WS_CLOSE_UNKNOWN_SESSION = 4404

CLIENT_COMMANDS = {
    "configure",
    "start",
    "pause",
    "resume",
    "set_speed",
    "trigger_scandal",
    "reset",
    "request_snapshot",
}


class PlayState(str, Enum):
    PAUSED = "paused"
    RUNNING = "running"


class _Subscriber:
    """Per-connection outbox.

    Messages leave in production order. Snapshots are droppable: a backlog
    beyond the limit sheds the oldest queued snapshot, so slow readers
    degrade to latest-only delivery while acks and errors are never lost.
    """

    SNAPSHOT_BACKLOG_LIMIT = 64

    def __init__(self, throttle: float | None):
        self.items: deque[dict] = deque()
        self.pending_snapshots = 0
        self.wake = asyncio.Event()
        self.min_interval = (1.0 / throttle) if throttle else 0.0
        self.closed = False

    def offer_snapshot(self, message: dict) -> None:
        if self.pending_snapshots >= self.SNAPSHOT_BACKLOG_LIMIT:
            for i, queued in enumerate(self.items):
                if queued["type"] == "snapshot":
                    del self.items[i]
                    self.pending_snapshots -= 1
                    break
        self.pending_snapshots += 1
        self.items.append(message)
        self.wake.set()

    def push_control(self, message: dict) -> None:
        self.items.append(message)
        self.wake.set()


class _Command:
    def __init__(self, type_: str, seq: Any, payload: dict, subscriber: _Subscriber | None):
        self.type = type_
        self.seq = seq
        self.payload = payload
        self.subscriber = subscriber


class Session:
    """One authoritative world plus its command queue and subscriber set."""

    def __init__(self, session_id: str, params: SimParams, candidates_spec) -> None:
        self.id = session_id
        self.params = params
        self.candidates_spec = candidates_spec  # tuple[Candidate, ...] | None
        self.world = self._fresh_world(params)
        self.play = PlayState.PAUSED
        self.tick_rate = DEFAULT_TICK_RATE
        self.commands: asyncio.Queue[_Command] = asyncio.Queue()
        self.subscribers: set[_Subscriber] = set()
        self.snapshot_seq = 0
        self.closed = False
        self.task: asyncio.Task | None = None

    def _fresh_world(self, params: SimParams):
        if self.candidates_spec is None:
            return init_world(params)
        return init_world(
            params,
            [c.position for c in self.candidates_spec],
            [c.label for c in self.candidates_spec],
        )

    # -- stepping ---------------------------------------------------------

    async def loop(self) -> None:
        try:
            while not self.closed:
                if self.play is PlayState.RUNNING:
                    while not self.commands.empty():
                        self._apply(self.commands.get_nowait())
                    if self.play is not PlayState.RUNNING:
                        continue
                    self.world = step(self.world)
                    self._broadcast()
                    await asyncio.sleep(1.0 / self.tick_rate)
                else:
                    self._apply(await self.commands.get())
        except asyncio.CancelledError:
            pass

    def _broadcast(self) -> None:
        message = {
            "type": "snapshot",
            "seq": self.snapshot_seq,
            "payload": build_snapshot(self),
        }
        self.snapshot_seq += 1
        for subscriber in self.subscribers:
            subscriber.offer_snapshot(message)

    # -- command application ----------------------------------------------

    def _ack(self, cmd: _Command, effective_step: int) -> None:
        if cmd.subscriber is not None:
            cmd.subscriber.push_control(
                {"type": "ack", "seq": cmd.seq, "payload": {"effective_step": effective_step}}
            )

    def _error(self, cmd: _Command, code: str, message: str) -> None:
        if cmd.subscriber is not None:
            cmd.subscriber.push_control(
                {"type": "error", "seq": cmd.seq, "payload": {"code": code, "message": message}}
            )

    def _apply(self, cmd: _Command) -> None:
        handler = getattr(self, f"_cmd_{cmd.type}", None)
        if handler is None:
            self._error(cmd, "unknown_type", f"unknown command type {cmd.type!r}")
            return
        handler(cmd)

    def _cmd_configure(self, cmd: _Command) -> None:
        raw_params = cmd.payload.get("params", {})
        raw_candidates = cmd.payload.get("candidates")
        if not isinstance(raw_params, dict):
            self._error(cmd, "invalid_params", "params must be an object")
            return
        try:
            candidates = parse_candidates(raw_candidates) if raw_candidates is not None else None
            merged = dict(raw_params)
            if candidates is not None:
                declared = merged.get("num_candidates")
                if declared is not None and declared != len(candidates):
                    raise ScenarioError("params.num_candidates", "does not match candidates")
                merged["num_candidates"] = len(candidates)
            params = SimParams(**merged)
        except (ScenarioError, ValueError, TypeError) as exc:
            self._error(cmd, "invalid_params", str(exc))
            return
        self.params = params
        self.candidates_spec = candidates
        self.world = self._fresh_world(params)
        self.play = PlayState.PAUSED
        self._ack(cmd, 0)
        self._broadcast()

    def _cmd_start(self, cmd: _Command) -> None:
        self.play = PlayState.RUNNING
        self._ack(cmd, self.world.time)
        self._broadcast()

    _cmd_resume = _cmd_start

    def _cmd_pause(self, cmd: _Command) -> None:
        self.play = PlayState.PAUSED
        self._ack(cmd, self.world.time)
        self._broadcast()

    def _cmd_set_speed(self, cmd: _Command) -> None:
        rate = cmd.payload.get("rate")
        if not isinstance(rate, (int, float)) or isinstance(rate, bool) or not rate > 0:
            self._error(cmd, "invalid_rate", "rate must be a number > 0; pause to halt")
            return
        self.tick_rate = float(rate)
        self._ack(cmd, self.world.time)
        self._broadcast()

    def _cmd_trigger_scandal(self, cmd: _Command) -> None:
        candidate = cmd.payload.get("candidate")
        potential = cmd.payload.get("potential")
        if not isinstance(candidate, int) or isinstance(candidate, bool):
            self._error(cmd, "invalid_payload", "candidate must be an integer id")
            return
        if not isinstance(potential, (int, float)) or isinstance(potential, bool):
            self._error(cmd, "invalid_payload", "potential must be a number")
            return
        try:
            self.world = trigger_scandal(self.world, candidate, float(potential))
        except KeyError:
            self._error(cmd, "unknown_candidate", f"unknown candidate id {candidate}")
            return
        except ValueError as exc:
            self._error(cmd, "invalid_potential", str(exc))
            return
        # repulsion lands on the next step; the snapshot at that step shows it
        self._ack(cmd, self.world.time + 1)

    def _cmd_reset(self, cmd: _Command) -> None:
        seed = cmd.payload.get("seed")
        params = self.params
        if seed is not None:
            if not isinstance(seed, int) or isinstance(seed, bool):
                self._error(cmd, "invalid_payload", "seed must be an integer")
                return
            try:
                params = replace(self.params, seed=seed)
            except ValueError as exc:
                self._error(cmd, "invalid_payload", str(exc))
                return
        self.params = params
        self.world = self._fresh_world(params)
        self.play = PlayState.PAUSED
        self._ack(cmd, 0)
        self._broadcast()

    def _cmd_request_snapshot(self, cmd: _Command) -> None:
        self._ack(cmd, self.world.time)
        if cmd.subscriber is not None:
            cmd.subscriber.offer_snapshot(
                {"type": "snapshot", "seq": self.snapshot_seq, "payload": build_snapshot(self)}
            )
            self.snapshot_seq += 1


def build_snapshot(session: Session) -> dict:
    """Consistent view of one post-step instant; voters may be downsampled."""
    world = session.world
    result = tally(world)  # always over the full population
    total = world.num_voters
    stride = max(1, -(-total // VOTER_DOWNSAMPLE_LIMIT))  # ceil division
    indices = range(0, total, stride)
    return {
        "schema_version": SNAPSHOT_SCHEMA_VERSION,
        "session": session.id,
        "time": world.time,
        "play_state": session.play.value,
        "tick_rate": session.tick_rate,
        "candidates": [
            {
                "id": c.id,
                "label": c.label,
                "position": [c.position[0], c.position[1]],
                "repulsion": c.repulsion,
            }
            for c in world.candidates
        ],
        "scandals": [
            {"id": s.id, "target": s.target, "potential": s.potential, "onset_time": s.onset_time}
            for s in world.scandals
        ],
        "voters": {
            "total": total,
            "sampled": len(indices),
            "ids": [world.voter_ids[i] for i in indices],
            "positions": [
                [float(world.voter_positions[i, 0]), float(world.voter_positions[i, 1])]
                for i in indices
            ],
        },
        "tally": {
            "votes": {str(cid): count for cid, count in result.votes.items()},
            "abstentions": result.abstentions,
            "abstention_rate": result.abstention_rate,
        },
    }


async def _sender(ws: WebSocket, subscriber: _Subscriber) -> None:
    """Drain the outbox in order; apply the snapshot throttle when one is set.

    Without a throttle every message leaves in exact production order. With
    one, a snapshot arriving too early is held back latest-wins while later
    control messages still flow.
    """
    loop = asyncio.get_running_loop()
    last_snapshot_at = float("-inf")
    held: dict | None = None
    rewake: asyncio.Task | None = None

    async def rewake_after(delay: float) -> None:
        await asyncio.sleep(delay)
        subscriber.wake.set()

    try:
        while not subscriber.closed:
            await subscriber.wake.wait()
            subscriber.wake.clear()
            while subscriber.items:
                message = subscriber.items.popleft()
                if message["type"] != "snapshot":
                    await ws.send_json(message)
                    continue
                subscriber.pending_snapshots -= 1
                if subscriber.min_interval <= 0.0 or (
                    loop.time() - last_snapshot_at >= subscriber.min_interval
                ):
                    held = None
                    await ws.send_json(message)
                    last_snapshot_at = loop.time()
                else:
                    held = message
            if held is not None:
                remaining = subscriber.min_interval - (loop.time() - last_snapshot_at)
                if remaining <= 0:
                    await ws.send_json(held)
                    last_snapshot_at = loop.time()
                    held = None
                elif rewake is None or rewake.done():
                    rewake = asyncio.ensure_future(rewake_after(remaining))
    finally:
        if rewake is not None:
            rewake.cancel()


def create_app() -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        for session in app.state.sessions.values():
            session.closed = True
            if session.task is not None:
                session.task.cancel()

    app = FastAPI(title="votesim service", lifespan=lifespan)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],  # unauthenticated local/demo scope
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.sessions = {}

    def get_session(session_id: str) -> Session | None:
        return app.state.sessions.get(session_id)

    @app.get("/healthz")
    async def healthz() -> dict:
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        body = b""
        try:
            body = await request.body()
            data = await request.json() if body else {}
        except Exception:
            return JSONResponse(
                status_code=400,
                content={"code": "invalid_json", "message": "request body must be JSON"},
            )
        if not isinstance(data, dict):
            return JSONResponse(
                status_code=400,
                content={"code": "invalid_payload", "message": "body must be an object"},
            )
        raw_params = data.get("params", {})
        raw_candidates = data.get("candidates")
        try:
            candidates = parse_candidates(raw_candidates) if raw_candidates is not None else None
            merged = dict(raw_params) if isinstance(raw_params, dict) else None
            if merged is None:
                raise ScenarioError("params", "must be an object")
            if candidates is not None:
                declared = merged.get("num_candidates")
                if declared is not None and declared != len(candidates):
                    raise ScenarioError("params.num_candidates", "does not match candidates")
                merged["num_candidates"] = len(candidates)
            params = SimParams(**merged)
        except (ScenarioError, ValueError, TypeError) as exc:
            return JSONResponse(
                status_code=400, content={"code": "invalid_params", "message": str(exc)}
            )
        session_id = uuid.uuid4().hex[:12]
        session = Session(session_id, params, candidates)
        session.task = asyncio.get_running_loop().create_task(session.loop())
        app.state.sessions[session_id] = session
        return {"session_id": session_id, "channel_url": f"/sessions/{session_id}/channel"}

    @app.websocket("/sessions/{session_id}/channel")
    async def channel(ws: WebSocket, session_id: str, throttle: float | None = None) -> None:
        session = get_session(session_id)
        await ws.accept()
        if session is None or session.closed:
            await ws.close(code=WS_CLOSE_UNKNOWN_SESSION, reason="unknown_session")
            return
        subscriber = _Subscriber(throttle)
        session.subscribers.add(subscriber)
        # late subscribers get the current state immediately
        subscriber.offer_snapshot(
            {"type": "snapshot", "seq": session.snapshot_seq, "payload": build_snapshot(session)}
        )
        session.snapshot_seq += 1
        sender = asyncio.ensure_future(_sender(ws, subscriber))
        try:
            while True:
                try:
                    message = await ws.receive_json()
                except WebSocketDisconnect:
                    break
                except Exception:
                    subscriber.push_control(
                        {
                            "type": "error",
                            "seq": None,
                            "payload": {"code": "invalid_json", "message": "not a JSON object"},
                        }
                    )
                    continue
                if not isinstance(message, dict) or not isinstance(message.get("type"), str):
                    subscriber.push_control(
                        {
                            "type": "error",
                            "seq": message.get("seq") if isinstance(message, dict) else None,
                            "payload": {
                                "code": "invalid_envelope",
                                "message": "expected {type, seq, payload}",
                            },
                        }
                    )
                    continue
                command_type = message["type"]
                seq = message.get("seq")
                payload = message.get("payload", {})
                if command_type not in CLIENT_COMMANDS:
                    subscriber.push_control(
                        {
                            "type": "error",
                            "seq": seq,
                            "payload": {
                                "code": "unknown_type",
                                "message": f"unknown command type {command_type!r}",
                            },
                        }
                    )
                    continue
                if not isinstance(payload, dict):
                    subscriber.push_control(
                        {
                            "type": "error",
                            "seq": seq,
                            "payload": {"code": "invalid_payload", "message": "payload must be an object"},
                        }
                    )
                    continue
                await session.commands.put(_Command(command_type, seq, payload, subscriber))
        finally:
            subscriber.closed = True
            session.subscribers.discard(subscriber)
            sender.cancel()

    return app


app = create_app()


def main() -> None:
    import uvicorn

    uvicorn.run(app, host="127.0.0.1", port=8000)


if __name__ == "__main__":
    main()
