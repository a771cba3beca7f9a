import json
import socket
import sys
import threading

import numpy as np
import pytest

from rlaod.environment import ExternalDetector, SceneParams, generate_scene
from rlaod.errors import ProtocolError

STUB = [sys.executable, "-m", "rlaod.environment.stub_detector"]


@pytest.fixture
def image():
    return generate_scene(0, SceneParams(width=32, height=32, count_range=(0, 0))).image


def make_fixture(tmp_path, payload):
    path = tmp_path / "fixture.json"
    path.write_text(json.dumps(payload))
    return str(path)


class TestStdioTransport:
    def test_loopback_fixture(self, image, tmp_path):
        fixture = make_fixture(
            tmp_path,
            {
                "detections": [
                    {"bbox": [1.0, 2.0, 11.0, 12.0], "score": 0.75},
                    {"bbox": [5.0, 5.0, 9.0, 9.0], "score": 0.25, "category": 3},
                ],
                "context_length": 512,
            },
        )
        with ExternalDetector(command=STUB + ["--fixture", fixture], timeout=10) as det:
            out = det.detect(image)
        assert len(out.detections) == 2
        assert out.detections[0].box.x_max == 11.0
        assert out.detections[0].score == 0.75
        assert out.detections[1].category == 3
        assert out.context.shape == (512,)

    def test_1024_context_reduced(self, image, tmp_path):
        fixture = make_fixture(
            tmp_path, {"detections": [], "context": list(np.arange(1024.0))}
        )
        with ExternalDetector(command=STUB + ["--fixture", fixture], timeout=10) as det:
            out = det.detect(image)
        assert out.context.shape == (512,)
        assert np.array_equal(out.context, np.arange(1.0, 1024.0, 2.0))

    def test_missing_detections_key(self, image):
        with ExternalDetector(command=STUB + ["--drop-key", "detections"], timeout=10) as det:
            with pytest.raises(ProtocolError, match="detections"):
                det.detect(image)

    def test_garbage_response(self, image):
        with ExternalDetector(command=STUB + ["--garbage"], timeout=10) as det:
            with pytest.raises(ProtocolError, match="malformed"):
                det.detect(image)

    def test_timeout(self, image):
        with ExternalDetector(command=STUB + ["--sleep", "5"], timeout=0.5) as det:
            with pytest.raises(ProtocolError, match="timed out"):
                det.detect(image)

    def test_bad_context_length(self, image):
        with ExternalDetector(command=STUB + ["--context-length", "100"], timeout=10) as det:
            with pytest.raises(ProtocolError, match="context length"):
                det.detect(image)

    def test_dead_process(self, image):
        with ExternalDetector(command=[sys.executable, "-c", "pass"], timeout=5) as det:
            with pytest.raises(ProtocolError):
                det.detect(image)

    def test_multiple_requests_increment_ids(self, image, tmp_path):
        fixture = make_fixture(tmp_path, {"detections": []})
        with ExternalDetector(command=STUB + ["--fixture", fixture], timeout=10) as det:
            det.detect(image)
            det.detect(image)  # id mismatch would raise


class TestTcpTransport:
    def test_tcp_round_trip(self, image):
        server = socket.create_server(("127.0.0.1", 0))
        port = server.getsockname()[1]

        def serve():
            conn, _ = server.accept()
            buf = b""
            while b"\n" not in buf:
                buf += conn.recv(4096)
            req = json.loads(buf.split(b"\n")[0])
            resp = {
                "id": req["id"],
                "detections": [{"bbox": [0.0, 0.0, 4.0, 4.0], "score": 0.5}],
                "context": [0.0] * 512,
            }
            conn.sendall(json.dumps(resp).encode() + b"\n")
            conn.close()

        thread = threading.Thread(target=serve, daemon=True)
        thread.start()
        with ExternalDetector(address=("127.0.0.1", port), timeout=10) as det:
            out = det.detect(image)
        thread.join(timeout=5)
        server.close()
        assert len(out.detections) == 1

    def test_connect_refused(self):
        with pytest.raises(ProtocolError, match="connect"):
            ExternalDetector(address=("127.0.0.1", 1), timeout=0.5)


def test_constructor_validation():
    with pytest.raises(ValueError):
        ExternalDetector()
    with pytest.raises(ValueError):
        ExternalDetector(command=["x"], address=("h", 1))
