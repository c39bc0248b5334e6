#!/usr/bin/env python3
"""Download the texts listed in corpus manifests.

Each text with a `url` is saved to its `path` (relative to the manifest).
When the manifest pins a `sha256`, the download must match it; otherwise
the computed digest is printed so it can be pinned with --pin.
"""
import argparse
import hashlib
import pathlib
import sys
import urllib.request

import yaml


def fetch(url, timeout):
    req = urllib.request.Request(url, headers={"User-Agent": "zipfkit-fetch/0.1"})
    with urllib.request.urlopen(req, timeout=timeout) as resp:
        return resp.read()


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("manifests", nargs="+", type=pathlib.Path)
    ap.add_argument("--force", action="store_true", help="re-download existing files")
    ap.add_argument("--pin", action="store_true", help="write computed sha256 values into the manifest")
    ap.add_argument("--timeout", type=float, default=60.0)
    args = ap.parse_args()

    failures = 0
    for manifest in args.manifests:
        doc = yaml.safe_load(manifest.read_text(encoding="utf-8"))
        changed = False
        for text in doc.get("texts", []):
            url = text.get("url")
            if not url:
                continue
            dest = (manifest.parent / text["path"]).resolve()
            if dest.exists() and not args.force:
                data = dest.read_bytes()
            else:
                try:
                    data = fetch(url, args.timeout)
                except OSError as e:
                    print(f"{text['id']}: download failed: {e}", file=sys.stderr)
                    failures += 1
                    continue
            digest = hashlib.sha256(data).hexdigest()
            pinned = text.get("sha256")
            if pinned and pinned != digest:
                print(f"{text['id']}: sha256 mismatch (expected {pinned}, got {digest})", file=sys.stderr)
                failures += 1
                continue
            dest.parent.mkdir(parents=True, exist_ok=True)
            if not dest.exists() or args.force:
                dest.write_bytes(data)
            print(f"{text['id']}: {dest} sha256={digest}{'' if pinned else ' (unpinned)'}")
            if args.pin and not pinned:
                text["sha256"] = digest
                changed = True
        if changed:
            manifest.write_text(yaml.safe_dump(doc, allow_unicode=True, sort_keys=False), encoding="utf-8")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
