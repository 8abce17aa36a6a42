use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{anyhow, Context};

use gda_core::corpus::AbstractDoc;
use gda_core::entities::{AnnotationPool, EntityMention, MentionSet};
use gda_core::eval::{align, resolve_sent_ids, score, supplied_mentions, EvalError, GroundTruthRow};
use gda_core::extraction::{
    classify_and_extract, components, expand_conjuncts, extract_gda, filter_arguments, prefilter, prepare_document,
    read_jsonl, type_arguments, write_jsonl, write_tsv, CorpusOutput, Extractor, OutputRow,
};
use gda_core::patterns::{match_pattern, REQUIRED_CAPTURES};
use gda_core::EvalReport;

use crate::config::{self, CheckArgs, EvaluateArgs, ExtractArgs, Format, InspectArgs, RunConfig};
use crate::Failure;

fn io_failure(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Processing(e.into())
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    match path {
        Some(p) => File::create(p)
            .map(|f| Box::new(BufWriter::new(f)) as Box<dyn Write>)
            .with_context(|| format!("cannot create {}", p.display()))
            .map_err(Failure::Config),
        None => Ok(Box::new(io::stdout().lock())),
    }
}

/// Loaded inputs shared by extract, evaluate and inspect.
struct Inputs {
    docs: Vec<AbstractDoc>,
    pool: AnnotationPool,
    patterns: gda_core::patterns::PatternSet,
    lexicons: gda_core::lexicons::Lexicons,
    doid: Option<gda_core::extraction::DoidMap>,
}

fn load_inputs(cfg: &RunConfig) -> Result<Inputs, Failure> {
    cfg.validate(true)?;
    let patterns = config::patterns(cfg.patterns.as_deref())?;
    let lexicons = config::lexicons(cfg.lexicons.as_deref())?;
    let doid = config::doid(cfg.doid_map.as_deref())?;
    let docs = config::corpus(cfg.corpus.as_deref().expect("validated"))?;
    let pool = config::pool(&cfg.pubtator)?;
    Ok(Inputs {
        docs,
        pool,
        patterns,
        lexicons,
        doid,
    })
}

impl Inputs {
    fn run(&self, mentions: MentionSet<'_>) -> CorpusOutput {
        Extractor {
            patterns: &self.patterns,
            lexicons: &self.lexicons,
            mentions,
            doid: self.doid.as_ref(),
        }
        .run(&self.docs)
    }
}

pub fn extract(args: ExtractArgs) -> Result<(), Failure> {
    let mut cfg = RunConfig::from_input(&args.input);
    cfg.truth = args.truth.clone();
    cfg.use_truth_mentions = args.use_truth_mentions;
    let inputs = load_inputs(&cfg)?;
    let supplied;
    let mentions = if args.use_truth_mentions {
        let rows = config::truth(cfg.truth.as_deref().expect("validated"))?;
        supplied = supplied_mentions(&rows, &inputs.docs);
        MentionSet::Supplied(&supplied)
    } else {
        MentionSet::Pool(&inputs.pool)
    };
    let out = inputs.run(mentions);
    let rows: Vec<OutputRow> = out.records.iter().map(OutputRow::from).collect();
    let w = sink(args.out.as_deref())?;
    match args.format {
        Format::Jsonl => write_jsonl(w, &rows).map_err(io_failure)?,
        Format::Tsv => write_tsv(w, &rows).map_err(io_failure)?,
    }
    if let Some(p) = &args.diagnostics {
        write_jsonl(sink(Some(p))?, &out.diagnostics).map_err(io_failure)?;
    }
    log::info!("{} records from {} documents", rows.len(), inputs.docs.len());
    Ok(())
}

fn score_rows(rows: &[OutputRow], truth: &[GroundTruthRow]) -> Result<EvalReport, Failure> {
    let alignment = align(rows, truth).map_err(|e| Failure::Processing(e.into()))?;
    score(&alignment).map_err(|e| match e {
        EvalError::Empty => Failure::Config(e.into()),
        e => Failure::Processing(e.into()),
    })
}

pub fn evaluate(args: EvaluateArgs) -> Result<(), Failure> {
    let mut cfg = RunConfig::from_input(&args.input);
    cfg.truth = Some(args.truth.clone());
    cfg.use_truth_mentions = args.use_truth_mentions;
    let mut truth = config::truth(&args.truth)?;

    let mut reports: Vec<(String, EvalReport)> = Vec::new();
    if let Some(pred) = &args.predictions {
        cfg.validate(false)?;
        if !pred.is_file() {
            return Err(Failure::Config(anyhow!("file not found: {}", pred.display())));
        }
        if let Some(c) = &cfg.corpus {
            let docs = config::corpus(c)?;
            warn_unresolved(resolve_sent_ids(&mut truth, &docs));
        }
        let file = File::open(pred).with_context(|| format!("cannot open {}", pred.display())).map_err(Failure::Config)?;
        let rows = read_jsonl(BufReader::new(file))
            .map_err(|e| Failure::Processing(anyhow!("{}: {e}", pred.display())))?;
        reports.push(("Predictions".into(), score_rows(&rows, &truth)?));
    } else {
        let inputs = load_inputs(&cfg)?;
        warn_unresolved(resolve_sent_ids(&mut truth, &inputs.docs));
        let supplied: BTreeMap<String, Vec<EntityMention>> = supplied_mentions(&truth, &inputs.docs);
        let mut conditions = Vec::new();
        if args.both || !args.use_truth_mentions {
            conditions.push(("PubTator", MentionSet::Pool(&inputs.pool)));
        }
        if args.both || args.use_truth_mentions {
            conditions.push(("Truth mentions", MentionSet::Supplied(&supplied)));
        }
        for (name, set) in conditions {
            let rows: Vec<OutputRow> = inputs.run(set).records.iter().map(OutputRow::from).collect();
            reports.push((name.to_string(), score_rows(&rows, &truth)?));
        }
    }

    let view: Vec<(&str, &EvalReport)> = reports.iter().map(|(n, r)| (n.as_str(), r)).collect();
    print!("{}", gda_core::eval::render_table(&view, args.average));
    if let Some(p) = &args.report_json {
        let map: BTreeMap<&str, &EvalReport> = view.iter().copied().collect();
        let mut w = sink(Some(p))?;
        serde_json::to_writer_pretty(&mut w, &map).map_err(io_failure)?;
        writeln!(w).and_then(|_| w.flush()).map_err(io_failure)?;
    }
    Ok(())
}

fn warn_unresolved(n: usize) {
    if n > 0 {
        log::warn!("{n} truth rows name a sentence not found in the corpus");
    }
}

pub fn check(args: CheckArgs) -> Result<(), Failure> {
    for d in args.patterns.iter().chain(&args.lexicons) {
        if !d.is_dir() {
            return Err(Failure::Config(anyhow!("directory not found: {}", d.display())));
        }
    }
    let patterns = config::patterns(args.patterns.as_deref())?;
    for (kind, list) in [("TypeA", &patterns.type_a), ("TypeB", &patterns.type_b)] {
        println!("{kind}: {} patterns", list.len());
        for p in list {
            println!("  {} (priority {}, {} nodes): {}", p.id, p.priority, p.node_count(), p.captures().join(", "));
        }
    }
    println!("required captures: {}", REQUIRED_CAPTURES.join(", "));
    let lexicons = config::lexicons(args.lexicons.as_deref())?;
    for lex in lexicons.iter() {
        println!("lexicon {}: {} phrases", lex.category.name(), lex.len());
    }
    for p in &args.corpus {
        if !p.is_file() {
            return Err(Failure::Config(anyhow!("file not found: {}", p.display())));
        }
        let docs = config::corpus(p)?;
        let sentences: usize = docs.iter().map(|d| d.all_sentences().count()).sum();
        println!("corpus {}: {} documents, {} sentences", p.display(), docs.len(), sentences);
    }
    for p in &args.pubtator {
        if !p.is_file() {
            return Err(Failure::Config(anyhow!("file not found: {}", p.display())));
        }
        let pool = config::pool(std::slice::from_ref(p))?;
        println!("pubtator {}: {} documents", p.display(), pool.pmids().count());
    }
    Ok(())
}

pub fn inspect(args: InspectArgs) -> Result<(), Failure> {
    let cfg = RunConfig::from_input(&args.input);
    let inputs = load_inputs(&cfg)?;
    let doc = inputs
        .docs
        .iter()
        .find(|d| d.pmid == args.pmid)
        .ok_or_else(|| Failure::Config(anyhow!("pmid {} not in corpus", args.pmid)))?;
    let set = MentionSet::Pool(&inputs.pool);
    let prepared = prepare_document(doc, set);
    let sid = args.sent_id;
    let sentence = prepared
        .sentences
        .get(sid)
        .ok_or_else(|| Failure::Config(anyhow!("pmid {} has no sentence {sid}", args.pmid)))?;
    let mentions = &prepared.mentions[sid];
    let mut out = io::stdout().lock();
    let mut emit = || -> io::Result<()> {
        writeln!(out, "# {} sent {}: {}", args.pmid, sid, sentence.text)?;
        for t in &sentence.tokens {
            writeln!(out, "{:>3} {:<20} {:<12} {:<6} {:>3} {}", t.index, t.form, t.lemma, t.pos(), t.head, t.deprel)?;
        }
        writeln!(out, "mentions:")?;
        for m in mentions {
            let id = m.norm_id.as_deref().unwrap_or("-");
            writeln!(out, "  {:?} `{}` {}..{} {} ({:?})", m.etype, m.surface, m.char_start, m.char_end, id, m.source)?;
        }
        writeln!(out, "prefilter: {}", prefilter(sentence, &inputs.lexicons))?;
        for p in inputs.patterns.all() {
            let matches = match_pattern(p, sentence);
            writeln!(out, "pattern {}: {} matches", p.id, matches.len())?;
            for m in &matches {
                let binds: Vec<String> = m.bindings.iter().map(|(k, v)| format!("{k}={}", sentence.token(*v).form)).collect();
                writeln!(out, "  {}", binds.join(" "))?;
            }
        }
        match classify_and_extract(sentence, &inputs.patterns) {
            None => writeln!(out, "structure: none")?,
            Some(cs) => {
                for cand in expand_conjuncts(&cs, sentence, mentions) {
                    let typing = type_arguments(&cand, sentence, &inputs.lexicons, mentions);
                    let c = components(sentence, &cand, sentence.span_text(cand.compared_aspect));
                    writeln!(
                        out,
                        "structure {} {}: scale `{}` aspect `{}` entity1 `{}` entity2 `{}`",
                        cand.pattern_id,
                        cand.sentence_type,
                        c.scale_indicator,
                        sentence.span_text(cand.compared_aspect),
                        c.entity1,
                        c.entity2.as_deref().unwrap_or("-"),
                    )?;
                    let e2 = typing.entity2.as_ref().map_or("-".to_string(), |e| e.phrase_type.to_string());
                    writeln!(
                        out,
                        "  typing: aspect {} entity1 {} entity2 {} -> {}",
                        typing.aspect.phrase_type,
                        typing.entity1.phrase_type,
                        e2,
                        if filter_arguments(&cand, &typing) { "kept" } else { "dropped" },
                    )?;
                }
            }
        }
        let result = extract_gda(doc, &inputs.patterns, &inputs.lexicons, set, inputs.doid.as_ref());
        for d in result.diagnostics.iter().filter(|d| d.sent_id == sid) {
            writeln!(out, "diagnostic: {}", serde_json::to_string(d).map_err(io::Error::other)?)?;
        }
        let rows: Vec<OutputRow> = result.records.iter().filter(|r| r.sent_id == sid).map(OutputRow::from).collect();
        for r in &rows {
            writeln!(out, "record: {}", serde_json::to_string(r).map_err(io::Error::other)?)?;
        }
        Ok(())
    };
    emit().map_err(io_failure)
}
