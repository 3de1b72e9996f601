"""
Serving a policy and querying it over the socket protocol
=========================================================

Start an inference server on a loopback port, connect a client,
run a few observation/action exchanges, and read the timing that
the server reports back with every action.
"""

import numpy as np

from nautilus.contracts import mock_policy
from nautilus.transport import (
    ActionChunkBroker,
    PolicyServer,
    ServerMetadata,
    client_connect,
    healthz_probe,
)
from nautilus.wire import TensorValue

# The server wraps any object with infer()/reset(). Here it is a
# deterministic mock that emits 4-step action chunks.
policy = mock_policy("random", action_dim=6, horizon=4, seed=0)
meta = ServerMetadata(action_dim=6, policy_name="demo-policy", execute_steps=4)

server = PolicyServer(policy, metadata=meta, host="127.0.0.1", port=0)
server.start()
print(f"serving on port {server.port}")

try:
    # Liveness is a plain HTTP GET, answered before any session state
    # exists, so process supervisors can poll it cheaply.
    print(f"healthz: {healthz_probe('127.0.0.1', server.port)}")

    with client_connect("127.0.0.1", server.port) as remote:
        # The first frame of every session is the server introducing
        # itself; the client holds onto it.
        intro = remote.get_server_metadata()
        print(f"connected to {intro.policy_name}, action_dim={intro.action_dim}")

        # An action is a map whose "actions" key holds the tensor. The
        # raw policy answers with a whole chunk at once.
        obs = {"state": TensorValue.from_numpy(np.zeros(6, dtype=np.float32))}
        chunk = remote.infer(obs)["actions"].to_numpy()
        print(f"raw chunk shape: {chunk.shape}")

        # The broker turns chunked inference into a per-step policy:
        # one network call, then execute_steps local replays.
        stepper = ActionChunkBroker(remote, action_horizon=4, execute_steps=4)
        stepper.reset()
        for step in range(8):
            action = stepper.infer(obs)["actions"].to_numpy()
            print(f"step {step}: action[:2] = {np.round(action[:2], 3)}")

        # Server-side timing rides along on every action frame.
        last = remote.timings[-1]
        print(f"last infer took {last.infer_ms:.2f} ms on the server")
finally:
    server.stop()
print("server stopped")
