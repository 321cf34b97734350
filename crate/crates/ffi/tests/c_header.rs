//! Compiles and runs a small C program against the generated header and the
//! static library. Skipped when no C compiler is on PATH.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <math.h>
#include "affinity_discord.h"

int main(void) {
    AdState *s = NULL;
    if (ad_state_family("werner2", 2, 1.0, &s) != AD_STATUS_OK) return 10;
    double v = 0.0;
    if (ad_closed_form_2xn(s, &v) != AD_STATUS_OK) return 11;
    ad_state_free(s);
    if (fabs(v - 0.5) > 1e-12) return 12;

    double re[4] = {2.0, 0.0, 0.0, 0.0};
    if (ad_state_from_parts(1, 2, re, NULL, &s) != AD_STATUS_INVALID_STATE) return 13;
    char msg[128];
    ad_last_error_message(msg, sizeof msg);
    printf("%.6f %s\n", v, msg);
    return 0;
}
"#;

fn find_cc() -> Option<String> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    Command::new(&cc).arg("--version").output().ok().filter(|o| o.status.success()).map(|_| cc)
}

#[test]
fn header_compiles_and_links() {
    let Some(cc) = find_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libaffinity_discord_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(&cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");

    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("0.500000 not_unit_trace"), "{stdout}");
}
