"""Machine simulator: state transitions, replies, and the TCP front."""

import socket

from orgweave.robot import (
    ERR_BAD_ARG,
    ERR_BUSY,
    ERR_NO_IMAGE,
    ERR_NO_MATERIAL,
    Command,
    RobotAdapter,
    RobotServer,
    RobotState,
    execute,
    parse_command,
)


def test_parse_command_accepts_protocol_lines():
    assert parse_command("LOAD_IMAGE im_pg1") == Command("LOAD_IMAGE", "im_pg1")
    assert parse_command("  MANUFACTURE \n") == Command("MANUFACTURE")
    assert parse_command("STATUS") == Command("STATUS")


def test_parse_command_rejects_malformed_lines():
    assert parse_command("") is None
    assert parse_command("POLISH") is None
    assert parse_command("LOAD_IMAGE") is None
    assert parse_command("LOAD_IMAGE a b") is None
    assert parse_command("CLEAR now") is None


def test_manufacture_requires_image_then_material():
    state = RobotState()
    state, reply = execute(state, Command("MANUFACTURE"))
    assert reply == ERR_NO_IMAGE
    state, _ = execute(state, Command("LOAD_IMAGE", "im1"))
    state, reply = execute(state, Command("MANUFACTURE"))
    assert reply == ERR_NO_MATERIAL
    state, _ = execute(state, Command("FEED", "rm1"))
    state, reply = execute(state, Command("MANUFACTURE"))
    assert reply == "OK PIECE pc1"
    assert state.bin == ("pc1",)
    assert state.material is None
    assert state.waste == 1


def test_manufacture_consumes_material_each_time():
    state = RobotState(loaded_image="im1", material="rm1")
    state, _ = execute(state, Command("MANUFACTURE"))
    _, reply = execute(state, Command("MANUFACTURE"))
    assert reply == ERR_NO_MATERIAL
    state, _ = execute(state, Command("FEED", "rm2"))
    state, reply = execute(state, Command("MANUFACTURE"))
    assert reply == "OK PIECE pc2"
    assert state.waste == 2


def test_clear_zeroes_waste_only():
    state = RobotState(loaded_image="im1", bin=("pc1",), waste=3)
    state, reply = execute(state, Command("CLEAR"))
    assert reply == "OK CLEARED"
    assert state.waste == 0
    assert state.bin == ("pc1",)
    assert state.loaded_image == "im1"


def test_status_reports_fields():
    state = RobotState(loaded_image="im1", material=None, bin=("pc1", "pc2"), waste=1)
    _, reply = execute(state, Command("STATUS"))
    assert reply == "OK STATUS image=im1 material=- pieces=2 waste=1"


def test_replies_are_deterministic():
    a = RobotAdapter()
    b = RobotAdapter()
    script = ["LOAD_IMAGE im1", "FEED rm1", "MANUFACTURE", "STATUS", "CLEAR"]
    assert a.run_script(script) == b.run_script(script)


def test_adapter_answers_bad_lines_without_raising():
    adapter = RobotAdapter()
    assert adapter.line("JUMP") == ERR_BAD_ARG
    assert adapter.line("") == ERR_BAD_ARG
    assert adapter.line("STATUS extra") == ERR_BAD_ARG


def _send_line(sock, text):
    sock.sendall((text + "\n").encode("ascii"))
    return sock.makefile().readline().strip()


def test_tcp_mode_serves_one_connection_and_rejects_a_second():
    server = RobotServer()
    server.start()
    host, port = server.address
    try:
        first = socket.create_connection((host, port))
        second = socket.create_connection((host, port))
        try:
            assert _send_line(first, "LOAD_IMAGE im1") == "OK IMAGE im1"
            assert _send_line(second, "STATUS") == ERR_BUSY
            assert _send_line(first, "FEED rm1") == "OK MATERIAL rm1"
            assert _send_line(first, "MANUFACTURE") == "OK PIECE pc1"
        finally:
            first.close()
            second.close()
        # after the owner hangs up, a fresh connection is served
        third = socket.create_connection((host, port))
        try:
            reply = _send_line(third, "STATUS")
            assert reply in ("OK STATUS image=im1 material=- pieces=1 waste=1", ERR_BUSY)
            if reply == ERR_BUSY:  # first close may still be releasing
                import time
                time.sleep(0.1)
                assert _send_line(third, "STATUS").startswith("OK STATUS")
        finally:
            third.close()
    finally:
        server.shutdown()
        server.server_close()
