use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use thiserror::Error;
use trajgnn::chaincode::Profile;
use trajgnn::gnn::{
    evaluate, load_model, predict as predict_classes, save_model, train_with, GnnModel,
    TrainConfig, HIDDEN_CHANNELS,
};
use trajgnn::graphdata::{
    build_graph, graph_stats, load_dataset, save_dataset, split_shuffle, to_dot, GraphDataset,
    TrajectoryGraph,
};
use trajgnn::pipeline::{
    image_to_graph, strokes_to_graph, trace_image, trace_strokes, PipelineError,
};
use trajgnn::raster::{load_idx_images, load_idx_labels, GrayImage};
use trajgnn::strokes::{load_strokes, write_strokes, StrokeSample};
use trajgnn::synthetic::{generate, Distortion};
use trajgnn::trace::format_paths;

use crate::{EvalArgs, InputArgs, InspectArgs, PredictArgs, PrepareArgs, SynthArgs, TrainArgs};

const IDX_CLASSES: usize = 10;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input file not found: {}", .0.display())]
    MissingInput(PathBuf),
    #[error("incompatible model: {0}")]
    IncompatibleModel(String),
    #[error("sample index {index} out of range for {len} samples")]
    IndexOutOfRange { index: usize, len: usize },
}

fn require_file(path: &Path) -> Result<()> {
    if !path.is_file() {
        return Err(CliError::MissingInput(path.to_path_buf()).into());
    }
    Ok(())
}

enum Samples {
    Images {
        images: Vec<GrayImage>,
        labels: Option<Vec<u8>>,
    },
    Strokes(Vec<StrokeSample>),
}

impl Samples {
    fn len(&self) -> usize {
        match self {
            Samples::Images { images, .. } => images.len(),
            Samples::Strokes(s) => s.len(),
        }
    }

    fn label(&self, i: usize) -> Option<usize> {
        match self {
            Samples::Images { labels, .. } => labels.as_ref().map(|l| l[i] as usize),
            Samples::Strokes(s) => Some(s[i].label),
        }
    }

    fn default_profile(&self) -> Profile {
        match self {
            Samples::Images { .. } => Profile::Offline,
            Samples::Strokes(_) => Profile::Online,
        }
    }

    fn to_graph(
        &self,
        i: usize,
        input: &InputArgs,
        profile: Profile,
    ) -> Result<TrajectoryGraph<f64>, PipelineError> {
        match self {
            Samples::Images { images, .. } => image_to_graph(
                &images[i],
                self.label(i).unwrap_or(0),
                input.threshold,
                profile,
            ),
            Samples::Strokes(s) => strokes_to_graph(&s[i], profile),
        }
    }
}

fn load_samples(input: &InputArgs) -> Result<Samples> {
    let limit = input.limit.map_or(usize::MAX, |l| l as usize);
    if let Some(path) = &input.images {
        require_file(path)?;
        if let Some(labels) = &input.labels {
            require_file(labels)?;
        }
        let mut images =
            load_idx_images(path).with_context(|| format!("reading {}", path.display()))?;
        let labels = match &input.labels {
            Some(lp) => {
                let mut labels = load_idx_labels(lp, IDX_CLASSES)
                    .with_context(|| format!("reading {}", lp.display()))?;
                if labels.len() != images.len() {
                    bail!("{} images but {} labels", images.len(), labels.len());
                }
                labels.truncate(limit);
                Some(labels)
            }
            None => None,
        };
        images.truncate(limit);
        Ok(Samples::Images { images, labels })
    } else if let Some(path) = &input.strokes {
        require_file(path)?;
        let mut strokes =
            load_strokes(path).with_context(|| format!("reading {}", path.display()))?;
        strokes.truncate(limit);
        Ok(Samples::Strokes(strokes))
    } else {
        bail!("give --images (with --labels) or --strokes")
    }
}

fn load_graphs(path: &Path) -> Result<GraphDataset<f64>> {
    require_file(path)?;
    load_dataset(path).with_context(|| format!("reading {}", path.display()))
}

fn load_gnn(path: &Path) -> Result<GnnModel<f64>> {
    require_file(path)?;
    load_model(path).with_context(|| format!("reading {}", path.display()))
}

fn check_compatible(model: &GnnModel<f64>, ds: &GraphDataset<f64>) -> Result<()> {
    if let Some(width) = ds.feature_width() {
        if width != model.feature_width() {
            return Err(CliError::IncompatibleModel(format!(
                "model feature width {} but dataset has {width}",
                model.feature_width()
            ))
            .into());
        }
    }
    if ds.num_classes() != model.num_classes() {
        return Err(CliError::IncompatibleModel(format!(
            "model has {} classes but dataset has {}",
            model.num_classes(),
            ds.num_classes()
        ))
        .into());
    }
    Ok(())
}

pub fn prepare(args: &PrepareArgs) -> Result<()> {
    let samples = load_samples(&args.input)?;
    if let Samples::Images { labels: None, .. } = samples {
        bail!("prepare needs --labels with --images");
    }
    let profile = args.input.profile.unwrap_or(samples.default_profile());
    let results: Vec<_> = (0..samples.len())
        .into_par_iter()
        .map(|i| samples.to_graph(i, &args.input, profile))
        .collect();

    let mut graphs = Vec::with_capacity(results.len());
    let mut skipped = 0usize;
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(g) => graphs.push(g),
            Err(e) if e.is_degenerate() => skipped += 1,
            Err(e) => return Err(e).with_context(|| format!("sample {i}")),
        }
    }
    if skipped > 0 {
        eprintln!("warning: skipped {skipped} samples with an empty or degenerate skeleton");
    }
    let classes = match (args.classes, &samples) {
        (Some(c), _) => c,
        (None, Samples::Images { .. }) => IDX_CLASSES,
        (None, Samples::Strokes(s)) => s.iter().map(|s| s.label + 1).max().unwrap_or(0),
    };
    let ds = GraphDataset::new(graphs, classes, Some(profile))?;
    save_dataset(&ds, &args.out).with_context(|| format!("writing {}", args.out.display()))?;

    println!("profile\t{profile}");
    for (class, count) in ds.class_counts().iter().enumerate() {
        println!("class {class}\t{count}");
    }
    println!("total\t{}", ds.len());
    println!("skipped\t{skipped}");
    Ok(())
}

pub fn train(args: &TrainArgs) -> Result<()> {
    let full = load_graphs(&args.dataset)?;
    let (train_set, test_set) = match &args.test_dataset {
        Some(path) => (full, load_graphs(path)?),
        None => {
            let (train, test) = split_shuffle(&full, args.train_fraction, args.seed)?;
            if let Some(split) = &args.split {
                save_dataset(&test, split)
                    .with_context(|| format!("writing {}", split.display()))?;
            }
            (train, test)
        }
    };
    let width = train_set.feature_width().context("training set is empty")?;
    if test_set.num_classes() != train_set.num_classes() {
        bail!(
            "training set has {} classes but test set has {}",
            train_set.num_classes(),
            test_set.num_classes()
        );
    }
    let config = TrainConfig {
        epochs: args.epochs,
        batch_size: args.batch_size,
        lr: args.lr,
        seed: args.seed,
        shuffle_each_epoch: true,
    };
    eprintln!(
        "training on {} graphs, testing on {} ({} classes, {} epochs)",
        train_set.len(),
        test_set.len(),
        train_set.num_classes(),
        config.epochs
    );

    let mut model =
        GnnModel::<f64>::new(width, HIDDEN_CHANNELS, train_set.num_classes(), args.seed);
    let mut csv = String::from("epoch,loss,train_acc,test_err\n");
    let mut eval_error = None;
    train_with(&mut model, &train_set, &config, |m, model| {
        let test_err = if test_set.is_empty() {
            String::new()
        } else {
            match evaluate(model, &test_set) {
                Ok(e) => format!("{:.2}", e.error_rate),
                Err(e) => {
                    eval_error.get_or_insert(e);
                    String::new()
                }
            }
        };
        eprintln!(
            "epoch {:>4}  loss {:.4}  train acc {:.4}  test err {}",
            m.epoch, m.loss, m.train_accuracy, test_err
        );
        let _ = writeln!(
            csv,
            "{},{:.6},{:.4},{}",
            m.epoch, m.loss, m.train_accuracy, test_err
        );
    })?;
    if let Some(e) = eval_error {
        return Err(e).context("evaluating test set");
    }

    save_model(&model, &args.model).with_context(|| format!("writing {}", args.model.display()))?;
    let metrics = args
        .out
        .clone()
        .unwrap_or_else(|| args.model.with_extension("csv"));
    fs::write(&metrics, csv).with_context(|| format!("writing {}", metrics.display()))?;
    Ok(())
}

fn format_confusion(confusion: &[Vec<usize>]) -> String {
    let width = confusion
        .iter()
        .flatten()
        .map(|c| c.to_string().len())
        .max()
        .unwrap_or(1)
        .max(confusion.len().to_string().len())
        + 1;
    let mut out = format!("{:>width$}", "t\\p");
    for c in 0..confusion.len() {
        let _ = write!(out, "{c:>width$}");
    }
    out.push('\n');
    for (t, row) in confusion.iter().enumerate() {
        let _ = write!(out, "{t:>width$}");
        for v in row {
            let _ = write!(out, "{v:>width$}");
        }
        out.push('\n');
    }
    out
}

pub fn eval(args: &EvalArgs) -> Result<()> {
    let model = load_gnn(&args.model)?;
    let ds = load_graphs(&args.dataset)?;
    if ds.is_empty() {
        bail!("dataset {} is empty", args.dataset.display());
    }
    check_compatible(&model, &ds)?;
    let result = evaluate(&model, &ds)?;
    println!("error rate: {:.2}%", result.error_rate);
    print!("{}", format_confusion(&result.confusion));
    Ok(())
}

pub fn predict(args: &PredictArgs) -> Result<()> {
    let model = load_gnn(&args.model)?;
    let (graphs, labels): (Vec<TrajectoryGraph<f64>>, Vec<Option<usize>>) = match &args.dataset {
        Some(path) => {
            let ds = load_graphs(path)?;
            check_compatible(&model, &ds)?;
            let labels = ds.graphs().iter().map(|g| Some(g.label())).collect();
            (ds.into_graphs(), labels)
        }
        None => {
            let samples = load_samples(&args.input)?;
            let profile = args.input.profile.unwrap_or(samples.default_profile());
            let mut graphs = Vec::new();
            let mut labels = Vec::new();
            for i in 0..samples.len() {
                match samples.to_graph(i, &args.input, profile) {
                    Ok(g) => {
                        graphs.push(g);
                        labels.push(samples.label(i));
                    }
                    Err(e) if e.is_degenerate() => eprintln!("warning: sample {i} skipped: {e}"),
                    Err(e) => return Err(e).with_context(|| format!("sample {i}")),
                }
            }
            (graphs, labels)
        }
    };
    if graphs.is_empty() {
        bail!("no samples to predict");
    }
    if graphs[0].feature_width() != model.feature_width() {
        return Err(CliError::IncompatibleModel(format!(
            "model feature width {} but input has {}",
            model.feature_width(),
            graphs[0].feature_width()
        ))
        .into());
    }
    let predicted = predict_classes(&model, &graphs)?;
    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    writeln!(out, "index\tpredicted\tlabel")?;
    for (i, (p, l)) in predicted.iter().zip(labels).enumerate() {
        let label = l.map_or_else(|| "-".to_string(), |l| l.to_string());
        writeln!(out, "{i}\t{p}\t{label}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn inspect(args: &InspectArgs) -> Result<()> {
    let samples = load_samples(&args.input)?;
    if args.index >= samples.len() {
        return Err(CliError::IndexOutOfRange {
            index: args.index,
            len: samples.len(),
        }
        .into());
    }
    let i = args.index;
    let profile = args.input.profile.unwrap_or(samples.default_profile());
    let label = samples.label(i);
    let (code, resampled) = match &samples {
        Samples::Images { images, .. } => {
            let t = trace_image::<f64>(&images[i], args.input.threshold, profile)?;
            println!("# skeleton");
            print!("{}", t.skeleton.to_art());
            println!("# paths (col row)");
            print!("{}", format_paths(&t.paths));
            (t.code, t.resampled)
        }
        Samples::Strokes(s) => {
            println!("# trajectory (x y)");
            for p in s[i].trajectory::<f64>().points() {
                println!("{} {}", p.x, p.y);
            }
            trace_strokes::<f64>(&s[i], profile)?
        }
    };
    let graph = build_graph(&code, &resampled, label.unwrap_or(0))?;
    let stats = graph_stats(&graph);
    println!("# chain code ({profile}, {} codes)", code.len());
    println!("{code}");
    println!("# graph");
    if let Some(l) = label {
        println!("label {l}");
    }
    println!("nodes {}", graph.num_nodes());
    println!("edges {}", graph.edges().len());
    println!(
        "degrees {}",
        stats
            .degree_sequence
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    );
    println!("isolated {}", stats.isolated_nodes);
    println!("self_loops {}", stats.self_loops);
    if let Some(path) = &args.dot {
        fs::write(path, to_dot(&graph)).with_context(|| format!("writing {}", path.display()))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

pub fn synth(args: &SynthArgs) -> Result<()> {
    let samples = generate(args.per_class, args.seed, &Distortion::default());
    let file =
        File::create(&args.out).with_context(|| format!("writing {}", args.out.display()))?;
    write_strokes(&samples, BufWriter::new(file))?;
    eprintln!("wrote {} samples to {}", samples.len(), args.out.display());
    Ok(())
}
