//! End-to-end runs of the `hawk` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

const GAME: &str = r#"
[game]
kind = "potential"
beta = "0.2"

[params]
s = "1/2"
epsilon = "2^-36"
q_cap = 200
q_certify = 200
"#;

fn hawk(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hawk"))
        .current_dir(dir)
        .env_remove("HAWK_SEED")
        .args(args)
        .stdin(Stdio::null())
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn config(dir: &TempDir, name: &str, body: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, format!("{GAME}{body}")).unwrap();
    path.to_string_lossy().into_owned()
}

fn play(dir: &TempDir, cfg: &str, out: &str, extra: &[&str]) -> Output {
    let mut args = vec!["--config", cfg, "--out", out];
    args.extend_from_slice(extra);
    args.push("play");
    hawk(dir.path(), &args)
}

#[test]
fn trigger_against_random_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = config(
        &dir,
        "m.toml",
        "[alice]\nstrategy = \"trigger\"\n[bob]\nstrategy = \"random\"\n",
    );
    let a = play(&dir, &cfg, "a.jsonl", &["--seed", "5"]);
    let b = play(&dir, &cfg, "b.jsonl", &["--seed", "5"]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(code(&b), 0);
    let (ta, tb) = (
        fs::read(dir.path().join("a.jsonl")).unwrap(),
        fs::read(dir.path().join("b.jsonl")).unwrap(),
    );
    assert_eq!(ta, tb);
    let header = String::from_utf8_lossy(&ta).lines().next().unwrap().to_string();
    assert!(header.contains("\"schema\":\"hawk-trace/1\""), "{header}");
    let c = play(&dir, &cfg, "c.jsonl", &["--seed", "6"]);
    assert_eq!(code(&c), 0);
    assert_ne!(fs::read(dir.path().join("c.jsonl")).unwrap(), ta);
}

#[test]
fn seed_also_comes_from_environment() {
    let dir = TempDir::new().unwrap();
    let cfg = config(
        &dir,
        "m.toml",
        "[alice]\nstrategy = \"trigger\"\n[bob]\nstrategy = \"random\"\n",
    );
    play(&dir, &cfg, "flag.jsonl", &["--seed", "9"]);
    let o = Command::new(env!("CARGO_BIN_EXE_hawk"))
        .current_dir(dir.path())
        .env("HAWK_SEED", "9")
        .args(["--config", &cfg, "--out", "env.jsonl", "play"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(
        fs::read(dir.path().join("flag.jsonl")).unwrap(),
        fs::read(dir.path().join("env.jsonl")).unwrap()
    );
}

#[test]
fn idle_alice_loses_to_the_target() {
    let dir = TempDir::new().unwrap();
    let cfg = config(
        &dir,
        "m.toml",
        "[alice]\nstrategy = \"idle\"\n[bob]\nstrategy = \"target\"\ntarget = [1, 1, 2]\n[start]\ncenter = \"target\"\n",
    );
    let o = play(&dir, &cfg, "t.jsonl", &[]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("verdict: BOB_WITNESS"));
}

#[test]
fn short_horizon_is_inconclusive() {
    let dir = TempDir::new().unwrap();
    let cfg = config(
        &dir,
        "m.toml",
        "[alice]\nstrategy = \"trigger\"\n[bob]\nstrategy = \"random\"\n[run]\nn_max = 1\n",
    );
    let o = play(&dir, &cfg, "t.jsonl", &[]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("INCONCLUSIVE"));
}

#[test]
fn invalid_configs_exit_64() {
    let dir = TempDir::new().unwrap();
    let bad = config(
        &dir,
        "bad.toml",
        "[alice]\nstrategy = \"trigger\"\n[bob]\nstrategy = \"nobody\"\n",
    );
    assert_eq!(code(&play(&dir, &bad, "t.jsonl", &[])), 64);
    let abs = config(
        &dir,
        "abs.toml",
        "[alice]\nstrategy = \"trigger\"\n[bob]\nstrategy = \"random\"\n",
    );
    fs::write(
        &abs,
        fs::read_to_string(&abs)
            .unwrap()
            .replace("\"potential\"", "\"absolute\""),
    )
    .unwrap();
    assert_eq!(code(&play(&dir, &abs, "t.jsonl", &[])), 64);
    assert_eq!(code(&hawk(dir.path(), &["play"])), 64);
    assert_eq!(code(&hawk(dir.path(), &["no-such-command"])), 64);
    assert_eq!(code(&hawk(dir.path(), &["--help"])), 0);
}

#[test]
fn scripted_bob_reads_the_script() {
    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("moves.txt"),
        "# two moves\n0.3 0.4 1/200\n\n0.3 0.4 1/400\n",
    )
    .unwrap();
    let cfg = config(
        &dir,
        "m.toml",
        "[alice]\nstrategy = \"idle\"\n[bob]\nstrategy = \"scripted\"\nscript = \"moves.txt\"\n\
         [start]\ncenter = [\"0.3\", \"0.4\"]\nradius = \"1/100\"\n[run]\nn_max = 2\n",
    );
    let o = play(&dir, &cfg, "t.jsonl", &[]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("stages: 2"));
    // A third move is demanded but the script is exhausted.
    fs::write(
        &cfg,
        fs::read_to_string(&cfg).unwrap().replace("n_max = 2", "n_max = 3"),
    )
    .unwrap();
    assert_eq!(code(&play(&dir, &cfg, "t.jsonl", &[])), 65);
}

#[test]
fn certify_a_rational_point() {
    let dir = TempDir::new().unwrap();
    let o = hawk(dir.path(), &["certify", "--point", "0.5", "0.5", "-q", "10"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(
        text.contains("bound: [0.00000000000000000e0, 0.00000000000000000e0]"),
        "{text}"
    );
    assert!(text.contains("minimizer: q = 2"));
}

#[test]
fn certify_a_ball() {
    let dir = TempDir::new().unwrap();
    let fail = stdout(&hawk(
        dir.path(),
        &[
            "certify",
            "--ball",
            "0.5",
            "0.5",
            "1/1000",
            "-q",
            "5",
            "--epsilon",
            "0.1",
        ],
    ));
    assert!(fail.contains("FAIL"), "{fail}");
    assert!(fail.contains("(1/2, 1/2)"), "{fail}");
    let pass = stdout(&hawk(
        dir.path(),
        &[
            "certify",
            "--ball",
            "0.5",
            "0.5",
            "1/100",
            "-q",
            "1",
            "--epsilon",
            "0.1",
        ],
    ));
    assert!(pass.contains("PASS"), "{pass}");
}

#[test]
fn calibration_writes_params_or_exits_4() {
    let dir = TempDir::new().unwrap();
    let body = "[alice]\nstrategy = \"trigger\"\n[bob]\nstrategy = \"random\"\n\
                [calibration]\nexp_lo = 30\nexp_hi = 40\nprobes = 10\n";
    let cfg = config(&dir, "c.toml", body);
    fs::write(
        &cfg,
        fs::read_to_string(&cfg).unwrap().replace("\"2^-36\"", "\"calibrate\""),
    )
    .unwrap();
    let o = hawk(dir.path(), &["--config", &cfg, "--out", "eps.toml", "calibrate"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let snippet = fs::read_to_string(dir.path().join("eps.toml")).unwrap();
    assert!(snippet.contains("epsilon = \"1/68719476736\""), "{snippet}");

    fs::write(
        &cfg,
        fs::read_to_string(&cfg)
            .unwrap()
            .replace("exp_lo = 30\nexp_hi = 40", "exp_lo = 20\nexp_hi = 22"),
    )
    .unwrap();
    let o = hawk(dir.path(), &["--config", &cfg, "--out", "none.toml", "calibrate"]);
    assert_eq!(code(&o), 4);
    assert!(stdout(&o).contains("densest violating class"));
}

#[test]
fn render_and_replay() {
    let dir = TempDir::new().unwrap();
    let cfg = config(
        &dir,
        "m.toml",
        "[alice]\nstrategy = \"trigger\"\n[bob]\nstrategy = \"greedy\"\n",
    );
    assert_eq!(code(&play(&dir, &cfg, "t.jsonl", &[])), 0);

    let a = hawk(dir.path(), &["render", "t.jsonl", "--panels", "4"]);
    let b = hawk(dir.path(), &["--out", "t.svg", "render", "t.jsonl", "--panels", "4"]);
    assert_eq!(code(&a), 0);
    assert_eq!(code(&b), 0);
    assert_eq!(a.stdout, fs::read(dir.path().join("t.svg")).unwrap());
    assert!(stdout(&a).starts_with("<svg"));

    let r = hawk(dir.path(), &["replay", "t.jsonl"]);
    assert_eq!(code(&r), 0);
    assert!(stdout(&r).contains("identical bytes: true"));

    // A tampered radius no longer replays.
    let text = fs::read_to_string(dir.path().join("t.jsonl")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let bob = lines.iter().position(|l| l.contains("\"player\":\"bob\"")).unwrap();
    let mut tampered: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
    tampered[bob] = tampered[bob].replacen("\"r\":\"256:", "\"r\":\"256:9", 1);
    fs::write(dir.path().join("x.jsonl"), tampered.join("\n") + "\n").unwrap();
    assert_eq!(code(&hawk(dir.path(), &["replay", "x.jsonl"])), 65);

    fs::write(dir.path().join("junk.jsonl"), "not json\n").unwrap();
    assert_eq!(code(&hawk(dir.path(), &["render", "junk.jsonl"])), 65);
    assert_eq!(code(&hawk(dir.path(), &["replay", "junk.jsonl"])), 65);
    assert_eq!(code(&hawk(dir.path(), &["render", "missing.jsonl"])), 65);
}

#[test]
fn tournament_table_and_traces() {
    let dir = TempDir::new().unwrap();
    let cfg = config(
        &dir,
        "t.toml",
        "[run]\nn_max = 40\n[matrix]\nseeds = [1, 2]\n\
         [[matrix.alice]]\nstrategy = \"trigger\"\n[[matrix.alice]]\nstrategy = \"idle\"\n\
         [[matrix.bob]]\nstrategy = \"random\"\n[[matrix.bob]]\nstrategy = \"greedy\"\n",
    );
    let a = hawk(dir.path(), &["--config", &cfg, "--out", "traces", "tournament"]);
    let b = hawk(dir.path(), &["--config", &cfg, "tournament"]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a).split("\n\n").next().unwrap().lines().count(), 1 + 8);
    assert_eq!(fs::read_dir(dir.path().join("traces")).unwrap().count(), 8);
    assert!(String::from_utf8_lossy(&a.stderr).contains("wall time"));
}
