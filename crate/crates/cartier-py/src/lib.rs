use std::collections::BTreeMap;

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use serde_json::Value;

use cartier::cartiercore::{AlgebraRecord, OpRecord, TwistRecord};
use cartier::cliharness::{
    parse_scene, run_corpus as corpus, run_scene as run, CheckKind, Flags, LoadedScene, ModuleSpec, Op, RingSpec, Scene, SceneReport, Status,
    Task, EXIT_CAP, EXIT_INVALID,
};
use cartier::error::CartierError;

create_exception!(cartierlab, CartierLabError, PyException);
create_exception!(cartierlab, ResourceCapError, CartierLabError);
create_exception!(cartierlab, InvalidStructureError, CartierLabError);

fn raise(code: i32, message: String) -> PyErr {
    match code {
        EXIT_CAP => ResourceCapError::new_err(message),
        EXIT_INVALID => InvalidStructureError::new_err(message),
        _ => CartierLabError::new_err(message),
    }
}

fn lib_err(e: CartierError) -> PyErr {
    raise(cartier::cliharness::exit_code_for(&e), e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| CartierLabError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parse_op(op: Option<&str>) -> PyResult<Option<Op>> {
    op.map(|s| serde_json::from_value::<Op>(Value::String(s.to_string())).map_err(|_| CartierLabError::new_err(format!("unknown operation '{s}'"))))
        .transpose()
}

fn flags(e_max: Option<u32>, seed: u64) -> Flags {
    Flags { e_max, seed, ..Default::default() }
}

/// Runs a scene given as JSON text and returns the report as a dict.
/// `op` restricts the run to tasks of one kind, as the command line subcommands do.
#[pyfunction]
#[pyo3(signature = (text, op=None, e_max=None, seed=0))]
fn run_scene<'py>(py: Python<'py>, text: &str, op: Option<&str>, e_max: Option<u32>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let only = parse_op(op)?;
    let command = op.unwrap_or("all");
    let report = match parse_scene(text, "<string>").and_then(|s| LoadedScene::load(s, e_max)) {
        Ok(scene) => run(&scene, only, command, &flags(e_max, seed), None),
        Err(e) => SceneReport::failed_to_load("<string>", command, &e),
    };
    to_py(py, &report)
}

/// Runs the bundled example corpus and returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (seed=0))]
fn run_corpus(py: Python<'_>, seed: u64) -> PyResult<Bound<'_, PyAny>> {
    to_py(py, &corpus(&flags(None, seed), None))
}

/// A finitely presented module over F_p[vars] with a Cartier algebra acting on it.
///
/// `generators` is a list of `(e, matrix)` pairs; the matrix entries are polynomial strings and the
/// operator acts as v -> trace_e(U v). The module is either a direct sum of cyclics R/I_1 + ... + R/I_k
/// (`cyclics`, each a list of ideal generators) or a presentation (`rank` and `relations`).
#[pyclass(module = "cartierlab", frozen)]
struct CartierModule {
    scene: Scene,
    e_max: Option<u32>,
}

impl CartierModule {
    fn task(&self, op: Op) -> Task {
        Task {
            op,
            module: Some("M".into()),
            algebra: Some("A".into()),
            ideal: None,
            t: None,
            t_before: None,
            top: None,
            sub: None,
            at: None,
            map: None,
            check: None,
            e0: None,
            policy: None,
            caps: None,
            legacy: false,
            candidates: None,
            e_values: None,
            expect: None,
            expect_negative: false,
        }
    }

    fn result<'py>(&self, py: Python<'py>, task: Task) -> PyResult<Bound<'py, PyAny>> {
        let mut scene = self.scene.clone();
        scene.tasks = vec![task];
        let loaded = LoadedScene::load(scene, self.e_max).map_err(lib_err)?;
        let report = run(&loaded, None, "python", &flags(self.e_max, 0), None);
        let task = report.tasks.into_iter().next().ok_or_else(|| CartierLabError::new_err("no task ran"))?;
        if let Some(e) = task.error {
            return Err(raise(e.exit_code, e.message));
        }
        if task.status == Status::Failed {
            return Err(CartierLabError::new_err("a property check failed"));
        }
        to_py(py, &task.result.unwrap_or(Value::Null))
    }
}

#[pymethods]
impl CartierModule {
    #[new]
    #[pyo3(signature = (p, vars, generators, cyclics=None, rank=None, relations=None, twist=None, e_max=None))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        p: u32,
        vars: Vec<String>,
        generators: Vec<(u32, Vec<Vec<String>>)>,
        cyclics: Option<Vec<Vec<String>>>,
        rank: Option<usize>,
        relations: Option<Vec<Vec<String>>>,
        twist: Option<Vec<(Vec<String>, String)>>,
        e_max: Option<u32>,
    ) -> PyResult<CartierModule> {
        let module = ModuleSpec { rank, relations: relations.unwrap_or_default(), cyclics };
        let algebra = AlgebraRecord {
            generators: generators.into_iter().map(|(e, matrix)| OpRecord { e, matrix }).collect(),
            twist: twist.unwrap_or_default().into_iter().map(|(ideal, t)| TwistRecord { ideal, t }).collect(),
        };
        let scene = Scene {
            name: String::new(),
            ring: RingSpec { p, vars },
            modules: BTreeMap::from([("M".to_string(), module)]),
            algebras: BTreeMap::from([("A".to_string(), algebra)]),
            maps: BTreeMap::new(),
            tasks: Vec::new(),
        };
        let cm = CartierModule { scene, e_max };
        let loaded = LoadedScene::load(cm.scene.clone(), e_max).map_err(lib_err)?;
        loaded.pair(&cm.task(Op::Tau)).map_err(lib_err)?;
        Ok(cm)
    }

    /// The test module; with `ideal` and `t` it is taken for the twisted algebra.
    #[pyo3(signature = (ideal=None, t=None))]
    fn tau<'py>(&self, py: Python<'py>, ideal: Option<Vec<String>>, t: Option<String>) -> PyResult<Bound<'py, PyAny>> {
        let mut task = self.task(Op::Tau);
        task.ideal = ideal;
        task.t = t;
        self.result(py, task)
    }

    /// The smallest submodule that agrees with M at every generic point of Ass.
    fn tau_prime<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        self.result(py, self.task(Op::Tauprime))
    }

    /// Associated primes, both of the Cartier module and of the underlying module.
    fn ass<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        self.result(py, self.task(Op::Ass))
    }

    /// F-jumping numbers of the ideal in (0, top], searched on the grid k / (p^A (p^B - 1)).
    #[pyo3(signature = (ideal, top=None, caps=None))]
    fn jumps<'py>(&self, py: Python<'py>, ideal: Vec<String>, top: Option<String>, caps: Option<(u32, u32)>) -> PyResult<Bound<'py, PyAny>> {
        let mut task = self.task(Op::Jumps);
        task.ideal = Some(ideal);
        task.top = top;
        task.caps = caps;
        self.result(py, task)
    }

    fn stabilize<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        self.result(py, self.task(Op::Stabilize))
    }

    fn nilpotent<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        self.result(py, self.task(Op::Nilpotent))
    }

    /// `{"f_pure": bool, "f_regular": bool}`.
    fn regularity<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let mut task = self.task(Op::Check);
        task.check = Some(CheckKind::Regularity);
        let out = self.result(py, task)?;
        out.del_item("passed")?;
        Ok(out)
    }

    /// The scene describing this module, as a dict that the command line tool accepts.
    fn scene<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.scene)
    }

    fn __repr__(&self) -> String {
        let r = &self.scene.ring;
        format!("CartierModule(p={}, vars={:?})", r.p, r.vars)
    }
}

#[pymodule]
fn cartierlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<CartierModule>()?;
    m.add_function(wrap_pyfunction!(run_scene, m)?)?;
    m.add_function(wrap_pyfunction!(run_corpus, m)?)?;
    m.add("CartierLabError", m.py().get_type::<CartierLabError>())?;
    m.add("ResourceCapError", m.py().get_type::<ResourceCapError>())?;
    m.add("InvalidStructureError", m.py().get_type::<InvalidStructureError>())?;
    m.add("ENGINE_VERSION", cartier::cliharness::ENGINE_VERSION)?;
    Ok(())
}
