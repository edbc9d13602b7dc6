"""Projects, gallery archives, and the HTTP service.

Designs live in projects (mechanism + cached curve + edit mode) collected in a
gallery that serializes to a versioned JSON archive.  The same gallery backs
the HTTP service used by interactive frontends; this demo drives the service
in-process with fastapi's test client.

Run:  python3 demos/05_projects_and_http_service.py
"""

import json

from fastapi.testclient import TestClient

from hapticslider.fixtures import bump_mechanism, symmetric_double_mechanism
from hapticslider.service import create_app
from hapticslider.store import Gallery, Project, save_archive


def main():
    gallery = Gallery()
    gallery.add(Project(name="one bump", mechanism=bump_mechanism(base_spring=True)))
    gallery.add(Project(name="symmetric", mechanism=symmetric_double_mechanism(),
                        edit_mode="symmetric"))

    archive = save_archive(gallery)
    print(f"archive: {len(archive)} bytes, "
          f"{len(json.loads(archive)['projects'])} projects\n")

    client = TestClient(create_app(gallery))
    projects = client.get("/projects").json()["projects"]
    pid = projects[0]["id"]
    print("projects:", [p["name"] for p in projects])

    # FD curves stream as newline-delimited JSON, one sample per line
    lines = client.get(f"/projects/{pid}/fd", params={"step": 1.0}).text.splitlines()
    print(f"\nstreamed {len(lines) - 1} samples (+ final summary record):")
    for line in lines[:4]:
        print(" ", line)
    summary = json.loads(lines[-1])
    print(f"  ... engine {summary['engine_version']}, "
          f"table v{summary['table_version']}, warnings: {summary['warnings']}")

    # single-displacement solve behind the UI's scrub slider
    at = client.get(f"/projects/{pid}/fd/at", params={"s": 5.0}).json()
    print(f"\nat s = 5.0 mm: forward {at['force_forward_N']:.4f} N, "
          f"reverse {at['force_reverse_N']:.4f} N, "
          f"base {at['base_force_N']:.4f} N")
    for side in at["sides"]:
        print(f"  side contact: {side['state']}, "
              f"deflection {side['tip_deflection_mm']:.3f} mm")


if __name__ == "__main__":
    main()
