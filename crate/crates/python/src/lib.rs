//! Python bindings: load policies, learn trees, run the pipeline and read
//! back sizes, evaluations, reports and DOT renderings.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use pdd_core::bitblast::build_bbbdd;
use pdd_core::pipeline::{run_pipeline, PipelineOptions, PipelineResult, Stage};
use pdd_core::policy::{load_policy, load_policy_path, ActionSet, Evaluation, Format, Value, VarKind};
use pdd_core::reorder::{ReorderMode, ReorderOptions};
use pdd_core::report::{dd_to_dot, dt_to_dot, ComparisonReport, ComparisonRow};
use pdd_core::{evaluate_dt, lift, DtNode, Error, LearnOptions};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::OrderViolation { .. } | Error::ManagerMismatch | Error::KindMismatch | Error::MissingPredicate(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

#[derive(FromPyObject)]
enum Number {
    Int(i64),
    Real(f64),
}

impl From<Number> for Value {
    fn from(n: Number) -> Value {
        match n {
            Number::Int(i) => Value::Int(i),
            Number::Real(r) => Value::real(r),
        }
    }
}

fn evaluation(values: Vec<Number>) -> Evaluation {
    Evaluation(values.into_iter().map(Value::from).collect())
}

fn actions_list(a: &ActionSet) -> Vec<String> {
    a.iter().map(str::to_string).collect()
}

/// A policy table mapping states to sets of allowed actions.
#[pyclass(name = "Policy", frozen)]
struct PyPolicy {
    inner: pdd_core::Policy,
}

#[pymethods]
impl PyPolicy {
    /// `Policy(["x", "y"], [([0, 0], ["a", "b"]), ...])`
    #[new]
    fn new(variables: Vec<String>, rows: Vec<(Vec<Number>, Vec<String>)>) -> PyResult<Self> {
        let vars = variables.into_iter().map(|v| (v, None)).collect();
        let rows = rows
            .into_iter()
            .map(|(s, a)| (s.into_iter().map(Value::from).collect(), ActionSet::new(a)))
            .collect();
        Ok(PyPolicy {
            inner: pdd_core::Policy::new(vars, rows).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn from_csv(text: &str) -> PyResult<Self> {
        Ok(PyPolicy {
            inner: load_policy(text.as_bytes(), Format::Csv).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyPolicy {
            inner: load_policy(text.as_bytes(), Format::Json).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        Ok(PyPolicy {
            inner: load_policy_path(&path).map_err(|e| PyValueError::new_err(format!("{}: {e}", path.display())))?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (size, seed=0, goals=1))]
    fn grid_world(size: usize, seed: u64, goals: usize) -> PyResult<Self> {
        let spec = pdd_core::gen::GridSpec {
            goals,
            ..pdd_core::gen::GridSpec::square(size, seed)
        };
        Ok(PyPolicy {
            inner: pdd_core::gen::grid_world(spec).map_err(to_py)?,
        })
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn variables(&self) -> Vec<String> {
        self.inner.vars().iter().map(|v| v.name.clone()).collect()
    }

    #[getter]
    fn kinds(&self) -> Vec<&'static str> {
        self.inner
            .vars()
            .iter()
            .map(|v| match v.kind {
                VarKind::Int => "int",
                VarKind::Real => "real",
            })
            .collect()
    }

    fn rows(&self) -> Vec<(Vec<f64>, Vec<String>)> {
        self.inner
            .rows()
            .map(|(s, a)| (s.0.iter().map(|v| v.as_f64()).collect(), actions_list(a)))
            .collect()
    }

    fn actions_at(&self, state: Vec<Number>) -> Option<Vec<String>> {
        self.inner.get(&evaluation(state)).map(actions_list)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// A learned decision tree.
#[pyclass(name = "Tree", frozen)]
struct PyTree {
    inner: DtNode,
    vars: Vec<pdd_core::VarDecl>,
}

#[pymethods]
impl PyTree {
    #[getter]
    fn decision_nodes(&self) -> usize {
        pdd_core::dt_decision_count(&self.inner)
    }

    fn evaluate(&self, state: Vec<Number>) -> PyResult<Vec<String>> {
        Ok(actions_list(evaluate_dt(&self.inner, &evaluation(state)).map_err(to_py)?))
    }

    fn to_dot(&self) -> String {
        dt_to_dot(&self.inner, &self.vars)
    }
}

#[pyfunction]
#[pyo3(signature = (policy, safe_early_stopping=false))]
fn learn_dt(policy: &PyPolicy, safe_early_stopping: bool) -> PyResult<PyTree> {
    let opts = LearnOptions {
        safe_early_stopping,
        ..Default::default()
    };
    Ok(PyTree {
        inner: pdd_core::learn_dt(&policy.inner, opts).map_err(to_py)?,
        vars: policy.inner.vars().to_vec(),
    })
}

/// The artifacts and report of one pipeline run.
#[pyclass(name = "PipelineRun", frozen)]
struct PyRun {
    policy: pdd_core::Policy,
    run: PipelineResult,
    report: ComparisonReport,
}

impl PyRun {
    fn artifact(&self, stage: Option<&str>) -> PyResult<&pdd_core::pipeline::PddArtifact> {
        match stage {
            None => Ok(self.run.last()),
            Some(s) => {
                let st: Stage = s.parse().map_err(to_py)?;
                self.run
                    .artifact(st)
                    .ok_or_else(|| PyValueError::new_err(format!("stage `{s}` was not run")))
            }
        }
    }
}

#[pymethods]
impl PyRun {
    /// `(stage, decision_nodes, action_nodes, shared_nodes, time_ms)` per stage.
    fn stages(&self) -> Vec<(String, usize, usize, usize, f64)> {
        self.run
            .report
            .stages
            .iter()
            .map(|r| (r.stage.to_string(), r.decision_nodes, r.action_nodes, r.shared_nodes, r.time_ms))
            .collect()
    }

    #[pyo3(signature = (stage=None))]
    fn decision_nodes(&self, stage: Option<&str>) -> PyResult<usize> {
        let a = self.artifact(stage)?;
        Ok(a.manager.decision_count(a.root))
    }

    #[getter]
    fn dt_decision_nodes(&self) -> usize {
        self.run.dt_decisions
    }

    #[getter]
    fn predicates(&self) -> Vec<String> {
        self.run.gamma.iter().map(|(_, p)| p.render(self.policy.vars())).collect()
    }

    #[getter]
    fn order(&self) -> Vec<u32> {
        self.run.last().manager.order().to_vec()
    }

    /// Actions the diagram of `stage` assigns to `state`, `None` off the
    /// policy's domain.
    #[pyo3(signature = (state, stage=None))]
    fn evaluate(&self, state: Vec<Number>, stage: Option<&str>) -> PyResult<Option<Vec<String>>> {
        let a = self.artifact(stage)?;
        let bits = lift(&a.gamma, &evaluation(state)).map_err(to_py)?;
        let label = a.manager.eval_vars(a.root, &bits).map_err(to_py)?;
        Ok(label.actions().map(actions_list))
    }

    #[pyo3(signature = (stage=None))]
    fn to_dot(&self, stage: Option<&str>) -> PyResult<String> {
        let a = self.artifact(stage)?;
        Ok(dd_to_dot(&a.manager, a.root, &a.gamma, self.policy.vars()))
    }

    fn tree(&self) -> PyTree {
        PyTree {
            inner: self.run.tree.clone(),
            vars: self.policy.vars().to_vec(),
        }
    }

    fn report_csv(&self) -> String {
        self.report.to_csv()
    }

    fn report_json(&self) -> String {
        self.report.to_json()
    }
}

#[pyfunction]
#[pyo3(signature = (
    policy,
    stages=None,
    reorder="auto",
    exhaustive_max_vars=8,
    careset=true,
    order=None,
    safe_early_stopping=false,
    baseline=true,
    name="controller",
))]
#[allow(clippy::too_many_arguments)]
fn pipeline(
    policy: &PyPolicy,
    stages: Option<Vec<String>>,
    reorder: &str,
    exhaustive_max_vars: usize,
    careset: bool,
    order: Option<Vec<u32>>,
    safe_early_stopping: bool,
    baseline: bool,
    name: &str,
) -> PyResult<PyRun> {
    let mut stage_list = match stages {
        Some(list) => list.iter().map(|s| s.parse::<Stage>()).collect::<Result<Vec<_>, _>>().map_err(to_py)?,
        None => vec![Stage::Reordered, Stage::Consistent, Stage::CareSet],
    };
    let mode = match reorder {
        "sift" => ReorderMode::SiftConverge,
        "exhaustive" => ReorderMode::Exhaustive,
        "auto" | "none" => ReorderMode::Auto,
        other => return Err(PyValueError::new_err(format!("unknown reorder mode `{other}`"))),
    };
    if reorder == "none" {
        stage_list.retain(|s| *s != Stage::Reordered);
    }
    if !careset {
        stage_list.retain(|s| *s != Stage::CareSet);
    }
    let opts = PipelineOptions {
        learn: LearnOptions {
            safe_early_stopping,
            ..Default::default()
        },
        stages: stage_list,
        reorder: ReorderOptions {
            mode,
            exhaustive_max_vars,
        },
        forced_order: order,
        reconsistent_after_reorder: true,
    };
    let run = run_pipeline(&policy.inner, &opts).map_err(to_py)?;
    let bb = if baseline {
        let t = std::time::Instant::now();
        let bb = build_bbbdd(&policy.inner).map_err(to_py)?;
        Some((bb, t.elapsed().as_secs_f64() * 1e3))
    } else {
        None
    };
    let row = ComparisonRow::new(name, &policy.inner, &run, bb.as_ref().map(|(b, t)| (b, *t)));
    Ok(PyRun {
        policy: policy.inner.clone(),
        run,
        report: ComparisonReport { rows: vec![row] },
    })
}

/// `(bbbdd - pdd) / (bbbdd - dt)`, or `None` when `dt >= bbbdd`.
#[pyfunction]
fn r_gap(bbbdd: usize, dt: usize, pdd: usize) -> Option<f64> {
    pdd_core::r_gap(bbbdd, dt, pdd)
}

#[pyfunction]
fn geometric_mean(values: Vec<f64>) -> PyResult<f64> {
    pdd_core::geometric_mean(&values).map_err(to_py)
}

#[pymodule]
fn pdd(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolicy>()?;
    m.add_class::<PyTree>()?;
    m.add_class::<PyRun>()?;
    m.add_function(wrap_pyfunction!(learn_dt, m)?)?;
    m.add_function(wrap_pyfunction!(pipeline, m)?)?;
    m.add_function(wrap_pyfunction!(r_gap, m)?)?;
    m.add_function(wrap_pyfunction!(geometric_mean, m)?)?;
    Ok(())
}
