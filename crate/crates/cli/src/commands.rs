//! One function per subcommand. Each reads its inputs, writes its artifacts
//! under the output directory and prints a short summary.

use std::fmt::Write as _;
use std::path::Path;

use shadowclass_core::data::{generate_synthetic, parse_dataset, write_dataset_string};
use shadowclass_core::seeding::Substream;
use shadowclass_core::shadow::shadow_features;
use shadowclass_core::training::{
    circuit_outputs, classification_metrics, decision, ClassificationMetrics, Shots,
};
use shadowclass_core::{
    preprocess, run_end_to_end, Dataset, Error, FeaturePipelineModel, Phase, Result, TrainReport,
};

use crate::config::RunConfig;

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn load_dataset(cfg: &RunConfig) -> Result<Dataset> {
    parse_dataset(&cfg.paths.dataset)
}

fn load_model(cfg: &RunConfig) -> Result<FeaturePipelineModel> {
    FeaturePipelineModel::from_json(&read_file(&cfg.paths.model)?)
}

fn load_report(cfg: &RunConfig) -> Result<TrainReport> {
    TrainReport::from_json(&read_file(&cfg.paths.report)?)
}

pub fn generate(cfg: &RunConfig) -> Result<()> {
    let ds = generate_synthetic(&cfg.gen)?;
    write_file(&cfg.paths.dataset, write_dataset_string(&ds))?;
    println!(
        "wrote {}: {} samples ({} Z2, {} Z3), {} shots x {} qubits, flip noise {}, seed {}",
        cfg.paths.dataset.display(),
        ds.len(),
        ds.count(Phase::Z2),
        ds.count(Phase::Z3),
        ds.n_shots(),
        ds.n_qubits(),
        cfg.gen.flip_noise,
        cfg.gen.seed
    );
    Ok(())
}

fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Vec<u8> {
    let mut buf = Vec::new();
    f(&mut buf).expect("writing to memory");
    buf
}

pub fn preprocess_cmd(cfg: &RunConfig) -> Result<()> {
    let ds = load_dataset(cfg)?;
    let pre = preprocess(&ds, cfg.mode, cfg.k)?;
    write_file(&cfg.paths.model, pre.model.to_json())?;
    let features_path = cfg.paths.out.join("features.csv");
    write_file(&features_path, csv_bytes(|w| pre.features.write_csv(w)))?;
    let expectations_path = cfg.paths.out.join("expectations.csv");
    write_file(
        &expectations_path,
        csv_bytes(|w| pre.expectations.write_csv(w)),
    )?;

    let ratios = &pre.model.pca.explained_ratio;
    let listed: Vec<String> = ratios.iter().map(|r| format!("{r:.4}")).collect();
    println!(
        "{} samples, {} qubits -> {} features ({} mode)",
        ds.len(),
        ds.n_qubits(),
        cfg.k,
        cfg.mode
    );
    println!(
        "explained variance: [{}], total {:.4}",
        listed.join(", "),
        ratios.iter().sum::<f64>()
    );
    println!(
        "wrote {}, {}, {}",
        cfg.paths.model.display(),
        features_path.display(),
        expectations_path.display()
    );
    Ok(())
}

fn accuracy_line(name: &str, m: &ClassificationMetrics) -> String {
    let correct = m.confusion[0][0] + m.confusion[1][1];
    let total: usize = m.confusion.iter().flatten().sum();
    format!(
        "{name:<5} accuracy {:.2}% ({correct}/{total}), macro F1 {:.4}",
        100.0 * m.accuracy,
        m.macro_f1
    )
}

pub fn train(cfg: &RunConfig) -> Result<()> {
    let ds = load_dataset(cfg)?;
    let (pre, report) = run_end_to_end(&ds, cfg.mode, cfg.k, &cfg.train)?;
    write_file(&cfg.paths.model, pre.model.to_json())?;
    write_file(
        &cfg.paths.out.join("features.csv"),
        csv_bytes(|w| pre.features.write_csv(w)),
    )?;
    write_file(&cfg.paths.report, report.to_json())?;
    let epochs_path = cfg.paths.out.join("epochs.csv");
    write_file(&epochs_path, report.epochs_csv())?;

    print!("{}", report.epochs_csv());
    println!("{}", accuracy_line("train", &report.train.metrics));
    println!("{}", accuracy_line("val", &report.val.metrics));
    println!("{}", accuracy_line("test", &report.test.metrics));
    println!(
        "weights [{}], efficiency score {:.4}",
        report
            .final_weights
            .iter()
            .map(|w| format!("{w:.6}"))
            .collect::<Vec<_>>()
            .join(", "),
        report.efficiency_score
    );
    println!(
        "wrote {}, {}",
        cfg.paths.report.display(),
        epochs_path.display()
    );
    Ok(())
}

pub fn evaluate(cfg: &RunConfig) -> Result<()> {
    let ds = load_dataset(cfg)?;
    let model = load_model(cfg)?;
    let report = load_report(cfg)?;
    let table = shadow_features(&ds, cfg.mode)?;
    let features = model.apply(&table)?;
    let z = circuit_outputs(
        &report.final_weights,
        &features,
        Shots::Exact,
        Substream::root(cfg.seed),
    )?;
    let preds: Vec<Phase> = z.iter().copied().map(decision).collect();
    let labels = ds.labels();
    let ids = ds.ids();

    let mut out = String::from("sample_id,label,z_mean,prediction\n");
    for i in 0..ds.len() {
        writeln!(out, "{},{},{},{}", ids[i], labels[i], z[i], preds[i]).unwrap();
    }
    let path = cfg.paths.out.join("evaluation.csv");
    write_file(&path, out)?;

    let all = classification_metrics(&preds, &labels)?;
    println!("{}", accuracy_line("all", &all));
    for (name, split) in [
        ("train", &report.split.train),
        ("val", &report.split.val),
        ("test", &report.split.test),
    ] {
        let idx: Vec<usize> = split
            .iter()
            .filter_map(|id| ids.iter().position(|x| x == id))
            .collect();
        if idx.len() != split.len() || idx.is_empty() {
            continue;
        }
        let p: Vec<Phase> = idx.iter().map(|&i| preds[i]).collect();
        let l: Vec<Phase> = idx.iter().map(|&i| labels[i]).collect();
        println!("{}", accuracy_line(name, &classification_metrics(&p, &l)?));
    }
    println!("confusion [true][predicted] (Z2, Z3): {:?}", all.confusion);
    println!("wrote {}", path.display());
    Ok(())
}

pub fn report(cfg: &RunConfig) -> Result<()> {
    let report = load_report(cfg)?;
    let model = load_model(cfg)?;
    let out = &cfg.paths.out;

    let mut loss = String::from("epoch,iteration,train_loss,val_loss,train_acc\n");
    for r in &report.epochs {
        writeln!(
            loss,
            "{},{},{},{},{}",
            r.epoch, r.iteration, r.train_loss, r.val_loss, r.train_acc
        )
        .unwrap();
    }

    let mut trace = String::from("iteration,c_k,loss_plus,loss_minus,shots\n");
    for s in &report.trace {
        writeln!(
            trace,
            "{},{},{},{},{}",
            s.iteration, s.c_k, s.loss_plus, s.loss_minus, s.shots
        )
        .unwrap();
    }

    let mut variance = String::from("component,eigenvalue,explained_ratio,cumulative\n");
    let mut cumulative = 0.0;
    for (j, (ev, r)) in model
        .pca
        .eigenvalues
        .iter()
        .zip(&model.pca.explained_ratio)
        .enumerate()
    {
        cumulative += r;
        writeln!(variance, "{},{ev},{r},{cumulative}", j + 1).unwrap();
    }

    let mut confusion = String::from("split,true,predicted,count\n");
    for (name, res) in [
        ("train", &report.train),
        ("val", &report.val),
        ("test", &report.test),
    ] {
        for t in Phase::ALL {
            for p in Phase::ALL {
                writeln!(
                    confusion,
                    "{name},{t},{p},{}",
                    res.metrics.confusion[t.index()][p.index()]
                )
                .unwrap();
            }
        }
    }

    let files = [
        ("epochs.csv", report.epochs_csv()),
        ("loss_curve.csv", loss),
        ("spsa_trace.csv", trace),
        ("pca_variance.csv", variance),
        ("confusion.csv", confusion),
    ];
    for (name, body) in &files {
        write_file(&out.join(name), body)?;
    }
    println!(
        "wrote {} tables to {}: {}",
        files.len(),
        out.display(),
        files.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
    );
    Ok(())
}
