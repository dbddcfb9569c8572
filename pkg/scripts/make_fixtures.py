"""Regenerate the synthetic fixtures under tests/fixtures/.

Output is deterministic; rerunning must leave the committed files unchanged.

    python scripts/make_fixtures.py
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from fixhints.rng import SplitMix64

FIXTURES = Path(__file__).resolve().parents[1] / "tests" / "fixtures"


def fake_hash(*parts) -> str:
    return hashlib.sha1("\x00".join(map(str, parts)).encode()).hexdigest()


def make_diff(path: str, func: str, start: int, body) -> str:
    """Unified diff for one hunk; ``body`` is a list of (tag, text), tag in ' +-'."""
    old_len = sum(1 for tag, _ in body if tag != "+")
    new_len = sum(1 for tag, _ in body if tag != "-")
    lines = [
        f"diff --git a/{path} b/{path}",
        f"index {fake_hash(path, start)[:7]}..{fake_hash(path, start, 1)[:7]} 100644",
        f"--- a/{path}",
        f"+++ b/{path}",
        f"@@ -{start},{old_len} +{start},{new_len} @@ {func}",
    ]
    lines += [tag + text for tag, text in body]
    return "\n".join(lines) + "\n"


def gitlog_record(h: str, subject: str, body: str = "", diff: str = "", day: int = 1) -> str:
    out = [
        f"commit {h}",
        "Author: Kernel Dev <dev@example.org>",
        f"Date:   Mon Mar {day:2d} 10:00:00 2014 +0100",
        "",
        f"    {subject}",
    ]
    if body:
        out.append("    ")
        out += [f"    {line}" if line else "" for line in body.splitlines()]
    out.append("")
    text = "\n".join(out) + "\n"
    if diff:
        text += diff + "\n"
    return text


# ------------------------------------------------------------ linking log

def linking_fixture():
    commits = [
        ("net: fix refcount leak", "Fixes Bug #12345 by checking return value", ["12345"]),
        ("mm: avoid oops on unmap", "Reported-by: someone\nSee bug#2001 for the trace.", ["2001"]),
        ("usb: add device id", "No functional change.", []),
        ("acpi: toshiba hotkeys",
         "Link: https://bugzilla.kernel.org/show_bug.cgi?id=9999", ["9999"]),
        ("docs: typo", "bugs in the #2 slot are not tracked here", []),
        ("ext4: handle ENOSPC", "Bug #  77 reproduced on 3.14", ["77"]),
        ("sched: tweak comment", "Mentions bugzilla without any id.", []),
        ("i2c: probe retry",
         "Closes https://bugzilla.redhat.com/show_bug.cgi?id=1024 upstream", ["1024"]),
        ("drm: cleanup", "issue 42 discussed on the list", []),
        ("Revert \"drm: cleanup\"", "This reverts commit 0123abc.", []),
        ("net: style", "whitespace only, debugfs # entries untouched", []),
        ("crypto: refactor", "Tracked internally as #555 (not a bug link).", []),
    ]
    log = []
    expected = []
    for i, (subject, body, ids) in enumerate(commits):
        h = fake_hash("link", i)
        log.append(gitlog_record(h, subject, body, day=i + 1))
        expected += [{"bug_id": b, "commit_hash": h} for b in ids]
    (FIXTURES / "linking_gitlog.txt").write_text("".join(log))
    expected.sort(key=lambda d: (d["bug_id"], d["commit_hash"]))
    (FIXTURES / "linking_expected.json").write_text(json.dumps(expected, indent=1) + "\n")


# ------------------------------------------------------ summarize patches

def null_check_patch(var: str, struct: str, indent: str, path: str, extra=()):
    body = [
        (" ", f"\tstruct {struct} *{var};"),
        (" ", ""),
        (" ", f"\t{var} = kmalloc(sizeof(*{var}), GFP_KERNEL);"),
        ("+", f"{indent}if (!{var}) return -ENOMEM;"),
        *extra,
        (" ", f"\t{var}->refcnt = 1;"),
    ]
    return make_diff(path, f"static int {struct}_init(void)", 40, body)


def summarize_fixture():
    patches = [
        null_check_patch("rule", "clk_rule", "\t", "drivers/clk/clk-rules.c"),
        null_check_patch("fck", "omap_fck", "\t", "arch/arm/mach-omap2/clock.c", extra=[
            ("-", "\tx=1;"), ("+", "\tx = 1;"), ("+", "\t/* allocation may fail */"),
        ]),
        make_diff("drivers/net/wan/hdlc.c", "static int hdlc_open(void)", 88, [
            (" ", "\tstruct hdlc_buf *buf;"),
            ("-", "\tbuf = static_buf;"),
            ("+", "\tbuf = kmalloc(len, GFP_KERNEL);"),
            ("+", "\tif (!buf) return -ENOMEM;"),
            (" ", "\tbuf->len = len;"),
        ]),
        null_check_patch("priv", "snd_priv", "        ", "sound/pci/snd-priv.c"),
        null_check_patch("dev", "w1_dev", "\t", "drivers/w1/w1.c", extra=[("+", "\tdev->id = id;")]),
        make_diff("drivers/gpu/ctx.c", "static int ctx_create(void)", 12, [
            ("-", "\tctx = kmalloc(sizeof(*ctx), GFP_KERNEL);"),
            ("+", "\tctx = kzalloc(sizeof(*ctx), GFP_KERNEL);"),
            (" ", "\tctx->state = 0;"),
        ]),
        make_diff("fs/data.c", "static void *data_alloc(size_t size)", 30, [
            ("-", "\tdata = kmalloc(size, GFP_KERNEL);"),
            ("-", "\tmemset(data, 0, size);"),
            ("+", "\tdata = kzalloc(size, GFP_KERNEL);"),
            (" ", "\treturn data;"),
        ]),
        make_diff("kernel/irq/lock.c", "static void irq_poke(void)", 70, [
            (" ", "\tunsigned long flags;"),
            ("-", "\tspin_lock(&lock);"),
            ("+", "\tspin_lock_irqsave(&lock, flags);"),
        ]),
    ]
    with open(FIXTURES / "summarize_patches.jsonl", "w") as fh:
        for i, diff in enumerate(patches):
            rec = {"hash": fake_hash("patch", i), "message": f"fix patch {i}", "diff_text": diff}
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


# ------------------------------------------------------ end-to-end corpus

VOCAB = {
    "null-deref": "null pointer dereference driver probe oops check crash device freed".split(),
    "paging-fault": "unable handle kernel paging request address fault page mapping virtual".split(),
    "network": "ethernet vlan bonding bridge packet loopback interface link transmit queue".split(),
}
NOISE = "after update when system boot regression".split()
IDENTS = ["ctx", "priv", "dev", "info", "host", "card", "port", "chip"]


def fix_diff(category: str, j: int) -> str:
    v = IDENTS[j % len(IDENTS)]
    if category == "null-deref":
        body = [
            (" ", f"\t{v} = kmalloc(sizeof(*{v}), GFP_KERNEL);"),
            ("+", f"\tif (!{v}) return -ENOMEM;"),
            (" ", f"\t{v}->ops = &default_ops;"),
        ]
        return make_diff(f"drivers/misc/{v}_{j}.c", f"static int {v}_probe(void)", 20 + j, body)
    if category == "paging-fault":
        addr = ["addr", "uaddr", "vaddr"][j % 3]
        body = [
            (" ", f"\tpmd = pmd_offset(pud, {addr});"),
            ("+", f"\tif ({addr} >= TASK_SIZE) return -EFAULT;"),
            ("-", f"\tpte = pte_offset_kernel(pmd, {addr});"),
            ("+", f"\tpte = pte_offset_map(pmd, {addr});"),
        ]
        return make_diff(f"arch/x86/mm/fault_{j}.c", "static int do_fault(void)", 100 + j, body)
    skb = ["skb", "nskb", "clone"][j % 3]
    body = [
        (" ", f"\tif (!netif_running({v}))"),
        ("+", f"\t\tdev_kfree_skb({skb});"),
        ("+", f"\tnetif_stop_queue({v});"),
    ]
    return make_diff(f"drivers/net/{v}_{j}.c", "static int xmit(void)", 60 + j, body)


def e2e_fixture():
    rng = SplitMix64(2014)
    reports = []
    log = []
    bug_id = 1000
    for category in sorted(VOCAB):
        words = VOCAB[category]
        for j in range(12):
            desc = [words[rng.randbelow(len(words))] for _ in range(6)]
            desc.insert(rng.randbelow(7), NOISE[rng.randbelow(len(NOISE))])
            reports.append({"id": str(bug_id), "short_desc": " ".join(desc), "label": category})
            if j < 6:
                h = fake_hash("e2e", bug_id)
                log.append(gitlog_record(h, f"{category}: fix for report {bug_id}",
                                         f"Fixes Bug #{bug_id}", fix_diff(category, j),
                                         day=1 + len(log) % 28))
            bug_id += 1
    # unlinked commit and a link to an unknown report
    log.append(gitlog_record(fake_hash("e2e", "misc"), "misc: cleanup", "No bug.",
                             make_diff("lib/misc.c", "void misc(void)", 5, [("+", "\tmisc_init();")])))
    log.append(gitlog_record(fake_hash("e2e", "dangling"), "fs: fix", "Fixes Bug #99999",
                             make_diff("fs/x.c", "void x(void)", 9, [("+", "\tx_sync();")])))
    with open(FIXTURES / "e2e_reports.jsonl", "w") as fh:
        for r in reports:
            fh.write(json.dumps(r, sort_keys=True) + "\n")
    (FIXTURES / "e2e_gitlog.txt").write_text("".join(log))
    new_report = {"id": "new-1", "short_desc": "kernel unable to handle paging request at virtual address"}
    (FIXTURES / "e2e_new_report.json").write_text(json.dumps(new_report, indent=1) + "\n")


if __name__ == "__main__":
    FIXTURES.mkdir(parents=True, exist_ok=True)
    linking_fixture()
    summarize_fixture()
    e2e_fixture()
    print(f"fixtures written to {FIXTURES}")
