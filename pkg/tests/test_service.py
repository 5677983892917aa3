"""HTTP surface: routes, auth, idempotency, error envelope."""

from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from crowdflow.fixtures import todo_client_request
from crowdflow.service import Authenticator, ProjectRegistry, create_app
from crowdflow.simulator import ping_client_request


class FakeClock:
    def __init__(self, start=0.0):
        self.now = start

    def __call__(self):
        return self.now

    def advance(self, minutes):
        self.now += minutes


CLIENT_AUTH = {"Authorization": "Bearer client:c1"}
W1 = {"Authorization": "Bearer worker:w1"}
W2 = {"Authorization": "Bearer worker:w2"}


@pytest.fixture()
def clock():
    return FakeClock()


@pytest.fixture()
def app_client(tmp_path, clock):
    registry = ProjectRegistry(data_dir=tmp_path)
    app = create_app(registry, Authenticator(), clock=clock)
    with TestClient(app) as client:
        yield client


def create_todo_project(client):
    response = client.post(
        "/projects",
        json={"clientRequest": todo_client_request().to_dict(),
              "projectId": "todo-1"},
        headers=CLIENT_AUTH,
    )
    assert response.status_code == 201, response.text
    return response.json()["projectId"]


def create_ping_project(client):
    response = client.post(
        "/projects",
        json={"clientRequest": ping_client_request().to_dict(),
              "projectId": "ping-1"},
        headers=CLIENT_AUTH,
    )
    assert response.status_code == 201, response.text
    return response.json()["projectId"]


def fetch(client, project_id, headers):
    response = client.post(f"/projects/{project_id}/microtasks/fetch",
                           headers=headers)
    assert response.status_code == 200, response.text
    return response.json()["assignment"]


class TestProjects:
    def test_create_returns_201_and_functions(self, app_client):
        project_id = create_todo_project(app_client)
        assert project_id == "todo-1"

    def test_invalid_request_answers_error_envelope(self, app_client):
        response = app_client.post(
            "/projects",
            json={"clientRequest": {"projectName": "x", "endpoints": []}},
            headers=CLIENT_AUTH,
        )
        assert response.status_code == 422
        body = response.json()
        assert body["code"] == "validation-failure"
        assert any("endpoint" in v for v in body["violations"])

    def test_worker_cannot_create_project(self, app_client):
        response = app_client.post(
            "/projects",
            json={"clientRequest": ping_client_request().to_dict()},
            headers=W1,
        )
        assert response.status_code == 403

    def test_missing_token_rejected(self, app_client):
        response = app_client.post("/projects", json={})
        assert response.status_code == 403

    def test_unknown_project_404(self, app_client):
        response = app_client.get("/projects/nope/dashboard", headers=W1)
        assert response.status_code == 404
        assert response.json()["code"] == "unknown-entity"


class TestDashboard:
    def test_fresh_todo_dashboard(self, app_client):
        project_id = create_todo_project(app_client)
        data = app_client.get(f"/projects/{project_id}/dashboard",
                              headers=W1).json()
        assert data["availableMicrotasks"] == 12
        assert len(data["functions"]) == 12
        assert data["complete"] is False

    def test_fetch_decrements_available(self, app_client):
        project_id = create_todo_project(app_client)
        fetch(app_client, project_id, W1)
        data = app_client.get(f"/projects/{project_id}/dashboard",
                              headers=W1).json()
        assert data["availableMicrotasks"] == 11


class TestMicrotaskFlow:
    def test_fetch_empty_queue_returns_none_available(self, app_client):
        project_id = create_ping_project(app_client)
        assert fetch(app_client, project_id, W1) is not None
        assert fetch(app_client, project_id, W2) is None

    def test_submit_review_rework_cycle(self, app_client):
        project_id = create_ping_project(app_client)
        assignment = fetch(app_client, project_id, W1)
        assert assignment["microtask"]["kind"] == "implement-behavior"

        response = app_client.post(
            f"/assignments/{assignment['assignmentId']}/submit",
            json={"submissionId": "s-1",
                  "payload": {"kind": "behavior-contribution",
                              "codeDiff": 'return "pong"',
                              "testsAdded": [], "stubsAdded": [],
                              "newFunctions": []}},
            headers=W1,
        )
        assert response.status_code == 200, response.text

        review_assignment = fetch(app_client, project_id, W2)
        assert review_assignment["microtask"]["kind"] == "review"
        context = review_assignment["microtask"]["context"]
        assert context["submission"]["id"] == "s-1"
        assert "previousVersion" in context

        response = app_client.post(
            f"/assignments/{review_assignment['assignmentId']}/submit",
            json={"stars": 2, "feedback": "not enough"},
            headers=W2,
        )
        assert response.status_code == 200
        rework = fetch(app_client, project_id, W1)
        assert rework["microtask"]["reworkFeedback"] == "not enough"

    def test_submit_idempotent_on_submission_id(self, app_client):
        project_id = create_ping_project(app_client)
        assignment = fetch(app_client, project_id, W1)
        body = {"submissionId": "s-1",
                "payload": {"kind": "behavior-contribution",
                            "codeDiff": "return 1"}}
        first = app_client.post(
            f"/assignments/{assignment['assignmentId']}/submit",
            json=body, headers=W1,
        ).json()
        assert first["created"] is True
        second = app_client.post(
            f"/assignments/{assignment['assignmentId']}/submit",
            json=body, headers=W1,
        ).json()
        assert second["created"] is False
        events = app_client.get(f"/projects/{project_id}/events",
                                headers=W1).json()["events"]
        received = [e for e in events if e["kind"] == "SubmissionReceived"]
        assert len(received) == 1

    def test_review_shaped_body_on_ifb_assignment_envelopes(self, app_client):
        project_id = create_ping_project(app_client)
        assignment = fetch(app_client, project_id, W1)
        response = app_client.post(
            f"/assignments/{assignment['assignmentId']}/submit",
            json={"stars": 5},
            headers=W1,
        )
        assert response.status_code == 422
        body = response.json()
        assert body["code"] == "validation-failure"
        assert body["violations"]

    def test_malformed_payload_kind_envelopes(self, app_client):
        project_id = create_ping_project(app_client)
        assignment = fetch(app_client, project_id, W1)
        response = app_client.post(
            f"/assignments/{assignment['assignmentId']}/submit",
            json={"payload": {"kind": "not-a-kind"}},
            headers=W1,
        )
        assert response.status_code == 422
        assert "malformed submission payload" in response.json()["message"]

    def test_submit_after_expiry_conflicts(self, app_client, clock):
        project_id = create_ping_project(app_client)
        assignment = fetch(app_client, project_id, W1)
        clock.advance(15.5)
        response = app_client.post(
            f"/assignments/{assignment['assignmentId']}/submit",
            json={"payload": {"kind": "behavior-contribution",
                              "codeDiff": "return 1"}},
            headers=W1,
        )
        assert response.status_code == 409
        assert response.json()["code"] == "stale-assignment"

    def test_skip_and_requeue(self, app_client):
        project_id = create_todo_project(app_client)
        assignment = fetch(app_client, project_id, W1)
        response = app_client.post(
            f"/assignments/{assignment['assignmentId']}/skip", headers=W1)
        assert response.status_code == 200
        next_assignment = fetch(app_client, project_id, W1)
        assert next_assignment["assignmentId"] != assignment["assignmentId"]

    def test_skip_not_held_is_stale(self, app_client):
        project_id = create_todo_project(app_client)
        assignment = fetch(app_client, project_id, W1)
        response = app_client.post(
            f"/assignments/{assignment['assignmentId']}/skip", headers=W2)
        assert response.status_code == 409

    def test_time_warning_notification_delivered(self, app_client, clock):
        project_id = create_ping_project(app_client)
        fetch(app_client, project_id, W1)
        clock.advance(14.2)
        app_client.get(f"/projects/{project_id}/dashboard", headers=W2)
        notes = app_client.get("/workers/w1/notifications",
                               headers=W1).json()["notifications"]
        assert any(n["kind"] == "time-warning" for n in notes)


class TestRunTestsRoute:
    def test_red_then_green_loop(self, app_client):
        project_id = create_ping_project(app_client)
        assignment = fetch(app_client, project_id, W1)
        test = {"id": "t1", "kind": "io-pair", "inputs": [],
                "expectedOutput": "pong", "description": "returns pong"}

        red = app_client.post(
            f"/assignments/{assignment['assignmentId']}/run-tests",
            json={"tests": [test]},
            headers=W1,
        ).json()
        assert red["perTest"][0]["status"] == "failed"

        green = app_client.post(
            f"/assignments/{assignment['assignmentId']}/run-tests",
            json={"tests": [test], "code": 'return "pong"'},
            headers=W1,
        ).json()
        assert green["perTest"][0]["status"] == "passed"

    def test_stub_round_trip_through_route(self, app_client):
        project_id = create_ping_project(app_client)
        assignment = fetch(app_client, project_id, W1)
        test = {"id": "t1", "kind": "io-pair", "inputs": [],
                "expectedOutput": True}
        body = {
            "code": 'call checkTodoDateFormat ["01/02/26,10:00"]\nreturn true',
            "tests": [test],
        }
        miss = app_client.post(
            f"/assignments/{assignment['assignmentId']}/run-tests",
            json=body, headers=W1,
        ).json()
        assert miss["perTest"][0]["status"] == "errored"
        assert miss["perTest"][0]["stubMisses"]

        body["stubs"] = [{"calleeName": "checkTodoDateFormat",
                          "argumentTuple": '["01/02/26,10:00"]',
                          "returnValue": True}]
        hit = app_client.post(
            f"/assignments/{assignment['assignmentId']}/run-tests",
            json=body, headers=W1,
        ).json()
        assert hit["perTest"][0]["status"] == "passed"


class TestQuestionsAndLeaderboard:
    def test_question_answer_thread_ordering(self, app_client, clock):
        project_id = create_todo_project(app_client)
        response = app_client.post(
            f"/projects/{project_id}/questions",
            json={"text": "How can I store a todo object in the database?"},
            headers=W1,
        )
        question_id = response.json()["questionId"]
        clock.advance(1.0)
        app_client.post(f"/questions/{question_id}/answers",
                        json={"text": "use save('todos', id, todo)",
                              "projectId": project_id},
                        headers=W2)
        clock.advance(1.0)
        app_client.post(f"/questions/{question_id}/answers",
                        json={"text": "see the persistence docs"},
                        headers=W1)
        threads = app_client.get(f"/projects/{project_id}/questions",
                                 headers=W2).json()["threads"]
        assert len(threads) == 1
        texts = [a["text"] for a in threads[0]["answers"]]
        assert texts == ["use save('todos', id, todo)",
                         "see the persistence docs"]

    def test_answer_to_unknown_question_404(self, app_client):
        create_todo_project(app_client)
        response = app_client.post("/questions/q-99/answers",
                                   json={"text": "hello"}, headers=W1)
        assert response.status_code == 404

    def test_leaderboard_after_review(self, app_client):
        project_id = create_ping_project(app_client)
        assignment = fetch(app_client, project_id, W1)
        app_client.post(
            f"/assignments/{assignment['assignmentId']}/submit",
            json={"submissionId": "s-1",
                  "payload": {"kind": "behavior-contribution",
                              "codeDiff": "return 1"}},
            headers=W1,
        )
        review_assignment = fetch(app_client, project_id, W2)
        app_client.post(
            f"/assignments/{review_assignment['assignmentId']}/submit",
            json={"stars": 5}, headers=W2,
        )
        rows = app_client.get(f"/projects/{project_id}/leaderboard",
                              headers=W1).json()["leaderboard"]
        assert rows == [{"workerId": "w1", "total": 10},
                        {"workerId": "w2", "total": 5}]


class TestIssuesAndPublish:
    def test_issue_resolution_requires_client(self, app_client):
        project_id = create_ping_project(app_client)
        assignment = fetch(app_client, project_id, W1)
        app_client.post(
            f"/assignments/{assignment['assignmentId']}/submit",
            json={"payload": {"kind": "issue-report",
                              "text": "signature missing parameter"}},
            headers=W1,
        )
        issues = app_client.get(f"/projects/{project_id}/issues",
                                headers=W1).json()["issues"]
        assert len(issues) == 1
        issue_id = issues[0]["id"]

        denied = app_client.post(
            f"/projects/{project_id}/issues/{issue_id}/resolve",
            json={}, headers=W1,
        )
        assert denied.status_code == 403

        resolved = app_client.post(
            f"/projects/{project_id}/issues/{issue_id}/resolve",
            json={"params": [{"name": "userId", "type": "string"}]},
            headers=CLIENT_AUTH,
        )
        assert resolved.status_code == 200
        data = app_client.get(f"/projects/{project_id}/dashboard",
                              headers=W1).json()
        assert data["availableMicrotasks"] == 1

    def test_publish_requires_client_and_completeness(self, app_client, tmp_path):
        project_id = create_ping_project(app_client)
        denied = app_client.post(f"/projects/{project_id}/publish", json={},
                                 headers=W1)
        assert denied.status_code == 403
        refused = app_client.post(f"/projects/{project_id}/publish", json={},
                                  headers=CLIENT_AUTH)
        assert refused.status_code == 409
        forced = app_client.post(
            f"/projects/{project_id}/publish",
            json={"force": True,
                  "target": {"kind": "local-directory",
                             "path": str(tmp_path / "out")}},
            headers=CLIENT_AUTH,
        )
        assert forced.status_code == 200, forced.text
        assert (tmp_path / "out" / "manifest.json").exists()
        events = app_client.get(f"/projects/{project_id}/events",
                                headers=W1).json()["events"]
        assert events[-1]["kind"] == "ProjectPublished"


class TestTokenFile:
    def test_static_token_file(self, tmp_path):
        import json

        token_path = tmp_path / "tokens.json"
        token_path.write_text(json.dumps({
            "secret-1": {"kind": "client", "id": "c9"},
            "secret-2": {"kind": "worker", "id": "w9"},
        }))
        auth = Authenticator.from_token_file(token_path)
        assert auth.resolve("secret-1").is_client
        assert auth.resolve("secret-2").id == "w9"
        with pytest.raises(Exception):
            auth.resolve("worker:w1")  # dev tokens disabled
