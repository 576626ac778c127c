//! Discriminator-guided greedy attack.
//!
//! A two-layer real/fake classifier over feature rows is trained alongside
//! the attack. The attacker ascends `Φ = J - c·L` where `L` is the binary
//! cross-entropy of the discriminator's output against the attacker's
//! target of "everything looks real": pushing `Φ` up both strengthens the
//! attack and moves fake feature rows toward the discriminator's real
//! region. The discriminator itself is periodically retrained against the
//! true real/fake indicators. With a large `c` the flips are dominated by
//! realism and the attack itself gets weaker; with `c = 0` the attack
//! reduces to plain greedy. Unlike plain greedy, every step may either add
//! or drop an entry, whichever has the larger absolute gradient.

use ndarray::{s, Array1, Array2, ArrayView2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::augmented_digest;
use crate::error::{Error, Result};
use crate::gcn::{par_dot, Engine, GcnModel, InputGradients};
use crate::graph::{AugmentedGraph, Direction};
use crate::greedy::{
    best_edge_add, best_edge_drop, best_feature_add, best_feature_drop, phase_for, AttackTrace,
    GanStepInfo, Phase, TraceStep,
};
use crate::objective::{AttackGoal, Budget};

/// Probability floor for the binary cross-entropy.
const PROB_CLAMP: f64 = 1e-12;

/// Class index conventions for the discriminator's two-column softmax.
pub const CLASS_REAL: usize = 0;
pub const CLASS_FAKE: usize = 1;

/// Two-layer real/fake classifier over node feature rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Discriminator {
    pub v0: Array2<f64>,
    pub v1: Array2<f64>,
    pub seed: u64,
}

impl Discriminator {
    pub fn init(d: usize, hidden: usize, seed: u64) -> Result<Self> {
        if hidden == 0 {
            return Err(Error::Config("discriminator hidden width must be at least 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |rows: usize, cols: usize| {
            let bound = (6.0 / (rows + cols) as f64).sqrt();
            Array2::from_shape_fn((rows, cols), |_| rng.random_range(-bound..bound))
        };
        Ok(Discriminator {
            v0: draw(d, hidden),
            v1: draw(hidden, 2),
            seed,
        })
    }

    pub fn hidden(&self) -> usize {
        self.v0.ncols()
    }

    /// Row-softmax output, columns `[real, fake]`.
    pub fn probs(&self, x: &ArrayView2<f64>) -> Array2<f64> {
        let h = par_dot(x, &self.v0.view()).mapv(|v| v.max(0.0));
        let logits = par_dot(&h.view(), &self.v1.view());
        softmax2(&logits)
    }

    /// Probability assigned to the fake class per row.
    pub fn prob_fake(&self, x: &ArrayView2<f64>) -> Array1<f64> {
        self.probs(x).column(CLASS_FAKE).to_owned()
    }
}

fn softmax2(logits: &Array2<f64>) -> Array2<f64> {
    let mut out = logits.clone();
    for mut row in out.rows_mut() {
        let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        row.mapv_inplace(|v| (v - max).exp());
        let sum: f64 = row.sum();
        row.mapv_inplace(|v| v / sum);
    }
    out
}

/// Binary cross-entropy of the fake-class probability column against the
/// given indicators (`true` = fake), summed over nodes. The probability
/// entering each log is clamped at `1e-12` from below, so a perfectly
/// confident correct classification contributes exactly zero.
pub fn discriminator_loss(d_out: &ArrayView2<f64>, y: &[bool]) -> Result<f64> {
    if d_out.nrows() != y.len() {
        return Err(Error::Structure(format!(
            "{} discriminator rows but {} indicators",
            d_out.nrows(),
            y.len()
        )));
    }
    let mut total = 0.0;
    for (i, &fake) in y.iter().enumerate() {
        let p = d_out[[i, CLASS_FAKE]];
        let q = if fake { p } else { 1.0 - p };
        total -= q.max(PROB_CLAMP).ln();
    }
    Ok(total)
}

/// Gradient-descent retraining of the discriminator on feature rows `x`
/// with indicators `y` (`true` = fake). Descends the mean cross-entropy;
/// zero iterations return the discriminator unchanged.
pub fn train_discriminator(
    mut disc: Discriminator,
    x: &ArrayView2<f64>,
    y: &[bool],
    iterations: usize,
    lr: f64,
) -> Result<Discriminator> {
    if x.nrows() != y.len() {
        return Err(Error::Structure(format!(
            "{} feature rows but {} indicators",
            x.nrows(),
            y.len()
        )));
    }
    let fakes = y.iter().filter(|&&f| f).count();
    if fakes == 0 || fakes == y.len() {
        return Err(Error::Config(
            "discriminator training needs at least one real and one fake row".into(),
        ));
    }
    let count = y.len() as f64;
    for _ in 0..iterations {
        let h_pre = par_dot(x, &disc.v0.view());
        let h = h_pre.mapv(|v| v.max(0.0));
        let logits = par_dot(&h.view(), &disc.v1.view());
        let probs = softmax2(&logits);

        let mut g = probs;
        for (i, &fake) in y.iter().enumerate() {
            let target = if fake { CLASS_FAKE } else { CLASS_REAL };
            g[[i, target]] -= 1.0;
        }
        g.mapv_inplace(|v| v / count);

        let d_v1 = par_dot(&h.t(), &g.view());
        let mut t = par_dot(&g.view(), &disc.v1.t());
        ndarray::Zip::from(&mut t).and(&h_pre).for_each(|g, &pre| {
            if pre <= 0.0 {
                *g = 0.0;
            }
        });
        let d_v0 = par_dot(&x.t(), &t.view());
        disc.v0.scaled_add(-lr, &d_v0);
        disc.v1.scaled_add(-lr, &d_v1);
    }
    Ok(disc)
}

/// Greedy-GAN schedule and weights.
#[derive(Debug, Clone, PartialEq)]
pub struct GanConfig {
    /// Weight of the discriminator term in the combined objective.
    pub c: f64,
    /// Greedy flips between discriminator retrains.
    pub greedy_steps: usize,
    /// Gradient-descent iterations per retrain (0 disables retraining).
    pub d_iters: usize,
    pub d_lr: f64,
    pub d_hidden: usize,
    /// When false every step is an add, as in plain greedy.
    pub allow_drops: bool,
    /// Skip the retrain that would otherwise run before the first flip.
    pub skip_initial_retrain: bool,
    pub seed: u64,
}

impl Default for GanConfig {
    fn default() -> Self {
        GanConfig {
            c: 1.0,
            greedy_steps: 10_000,
            d_iters: 10,
            d_lr: 0.01,
            d_hidden: 32,
            allow_drops: true,
            skip_initial_retrain: false,
            seed: 0,
        }
    }
}

impl GanConfig {
    fn validate(&self) -> Result<()> {
        if self.c < 0.0 {
            return Err(Error::Config(format!("discriminator weight c = {} < 0", self.c)));
        }
        if self.greedy_steps == 0 {
            return Err(Error::Config("greedy steps per epoch must be at least 1".into()));
        }
        Ok(())
    }
}

/// The attacker's realism target: binary cross-entropy of the
/// discriminator output against "every row is real". Fake rows that fool
/// the discriminator drive this toward zero.
fn fooling_loss(probs: &ArrayView2<f64>) -> f64 {
    let mut total = 0.0;
    for row in probs.rows() {
        total -= row[CLASS_REAL].max(PROB_CLAMP).ln();
    }
    total
}

/// Combined objective `Φ = J - c·L` where `J` is the goal objective on the
/// logits and `L` is the discriminator's cross-entropy against the
/// attacker's all-real target. With `c = 0` this is exactly `J`.
pub fn combined_objective(
    aug: &AugmentedGraph,
    model: &GcnModel,
    disc: &Discriminator,
    goal: &AttackGoal,
    c: f64,
) -> Result<f64> {
    let asm = crate::graph::assemble(aug)?;
    let trace = crate::gcn::forward(model, &asm)?;
    let j = goal.value(&trace.logits.view())?;
    if c == 0.0 {
        return Ok(j);
    }
    let probs = disc.probs(&asm.features().view());
    Ok(j - c * fooling_loss(&probs.view()))
}

/// State the GAN attack keeps in sync with the engine: the fake rows'
/// first-layer discriminator activations and the constant real-row part of
/// the fooling loss.
struct GanState {
    disc: Discriminator,
    kd_fake: Array2<f64>,
    real_loss_const: f64,
}

impl GanState {
    fn refresh(&mut self, eng: &Engine) {
        let n = eng.asm.n_real;
        let feats = eng.asm.features();
        self.kd_fake = par_dot(&feats.slice(s![n.., ..]), &self.disc.v0.view());
        let real_probs = self.disc.probs(&feats.slice(s![..n, ..]));
        self.real_loss_const = fooling_loss(&real_probs.view());
    }

    fn apply_feature_flip(&mut self, fake_row: usize, dim: usize, dir: Direction) {
        let sign = match dir {
            Direction::Add => 1.0,
            Direction::Drop => -1.0,
        };
        let v0_row = self.disc.v0.row(dim);
        self.kd_fake.row_mut(fake_row).scaled_add(sign, &v0_row);
    }

    /// Fooling loss over all rows plus its gradient in the fake feature
    /// rows.
    fn loss_and_grad(&self) -> (f64, Array2<f64>) {
        let h = self.kd_fake.mapv(|v| v.max(0.0));
        let logits = par_dot(&h.view(), &self.disc.v1.view());
        let probs = softmax2(&logits);
        let loss = self.real_loss_const + fooling_loss(&probs.view());

        // d(-ln p_real)/dlogits = probs - onehot(real), rowwise.
        let mut g = probs;
        g.column_mut(CLASS_REAL).mapv_inplace(|v| v - 1.0);
        let mut t = par_dot(&g.view(), &self.disc.v1.t());
        ndarray::Zip::from(&mut t)
            .and(&self.kd_fake)
            .for_each(|g, &pre| {
                if pre <= 0.0 {
                    *g = 0.0;
                }
            });
        let grad = par_dot(&t.view(), &self.disc.v0.t());
        (loss, grad)
    }
}

struct GanEval {
    j: f64,
    phi: f64,
    disc_loss: f64,
    grads: InputGradients,
}

/// Greedy attack co-trained against a real/fake discriminator. Every step
/// applies the add or the drop with the larger absolute combined-objective
/// gradient; the discriminator is retrained on the true indicators every
/// `greedy_steps` flips. Returns the attacked graph, the final
/// discriminator, and the annotated trace.
pub fn greedy_gan_attack(
    aug: AugmentedGraph,
    model: &GcnModel,
    goal: &AttackGoal,
    budget: &Budget,
    cfg: &GanConfig,
) -> Result<(AugmentedGraph, Discriminator, AttackTrace)> {
    cfg.validate()?;
    let d = aug.base().num_features();
    let n = aug.base().num_nodes();
    let m = aug.num_fake();
    let mut eng = Engine::new(model, aug)?;
    let mut state = GanState {
        disc: Discriminator::init(d, cfg.d_hidden, cfg.seed)?,
        kd_fake: Array2::zeros((m, cfg.d_hidden)),
        real_loss_const: 0.0,
    };
    state.refresh(&eng);

    let indicators: Vec<bool> = (0..n + m).map(|i| i >= n).collect();
    let retrain = |state: &mut GanState, eng: &Engine| -> Result<()> {
        if cfg.d_iters == 0 || m == 0 {
            return Ok(());
        }
        let disc = std::mem::replace(
            &mut state.disc,
            Discriminator::init(1, 1, 0).expect("placeholder"),
        );
        state.disc = train_discriminator(
            disc,
            &eng.asm.features().view(),
            &indicators,
            cfg.d_iters,
            cfg.d_lr,
        )?;
        state.refresh(eng);
        Ok(())
    };

    let gan_eval = |eng: &Engine, state: &GanState| -> Result<GanEval> {
        let base = eng.eval(goal)?;
        if cfg.c == 0.0 {
            return Ok(GanEval {
                j: base.value,
                phi: base.value,
                disc_loss: 0.0,
                grads: base.grads,
            });
        }
        let (loss, d_grad) = state.loss_and_grad();
        let mut grads = base.grads;
        grads.x.scaled_add(-cfg.c, &d_grad);
        Ok(GanEval {
            j: base.value,
            phi: base.value - cfg.c * loss,
            disc_loss: loss,
            grads,
        })
    };

    let mut steps: Vec<TraceStep> = Vec::new();
    let mut stopped_early = None;
    let fill_pending = |steps: &mut Vec<TraceStep>, eval: &GanEval| {
        if let Some(last) = steps.last_mut() {
            if last.j_after.is_nan() {
                last.j_after = eval.j;
                last.gan = Some(GanStepInfo {
                    phi_after: eval.phi,
                    disc_loss_after: eval.disc_loss,
                });
            }
        }
    };

    let mut t = 0;
    loop {
        if t >= budget.total {
            let eval = gan_eval(&eng, &state)?;
            fill_pending(&mut steps, &eval);
            break;
        }
        if t % cfg.greedy_steps == 0 && !(t == 0 && cfg.skip_initial_retrain) {
            // Close out the previous step under the outgoing discriminator.
            let eval = gan_eval(&eng, &state)?;
            fill_pending(&mut steps, &eval);
            retrain(&mut state, &eng)?;
        }
        let eval = gan_eval(&eng, &state)?;
        fill_pending(&mut steps, &eval);

        let phase = phase_for(t, budget);
        let (add, drop) = match phase {
            Phase::Edge => (
                best_edge_add(&eval.grads, &eng.aug),
                if cfg.allow_drops {
                    best_edge_drop(&eval.grads, &eng.aug)
                } else {
                    None
                },
            ),
            Phase::Feature => (
                best_feature_add(&eval.grads, &eng.aug),
                if cfg.allow_drops {
                    best_feature_drop(&eval.grads, &eng.aug)
                } else {
                    None
                },
            ),
        };
        let (coord, block, row, col, grad, action, alt, forced) = match (add, drop) {
            (None, None) => {
                stopped_early = Some(match phase {
                    Phase::Edge => "no edge candidate left".to_string(),
                    Phase::Feature => "no feature candidate left".to_string(),
                });
                let eval = gan_eval(&eng, &state)?;
                fill_pending(&mut steps, &eval);
                break;
            }
            (Some((coord, b, r, c2, g)), None) => {
                (coord, b, r, c2, g, Direction::Add, None, cfg.allow_drops)
            }
            (None, Some((coord, b, r, c2, g))) => {
                (coord, b, r, c2, g, Direction::Drop, None, true)
            }
            (Some((ac, ab, ar, acol, ag)), Some((dc, db, dr, dcol, dg))) => {
                if ag.abs() > dg.abs() {
                    (ac, ab, ar, acol, ag, Direction::Add, Some(dg), false)
                } else {
                    (dc, db, dr, dcol, dg, Direction::Drop, Some(ag), false)
                }
            }
        };
        eng.apply(coord, action)?;
        if let crate::graph::FlipCoord::Feature { node, dim } = coord {
            if cfg.c != 0.0 {
                state.apply_feature_flip(node - n, dim, action);
            }
        }
        steps.push(TraceStep {
            t,
            block,
            row,
            col,
            action,
            grad,
            alt_grad: alt,
            forced,
            j_before: eval.j,
            j_after: f64::NAN,
            gan: None,
        });
        t += 1;
    }

    let digest = augmented_digest(&eng.aug);
    Ok((
        eng.aug,
        state.disc,
        AttackTrace {
            steps,
            stopped_early,
            digest,
        },
    ))
}

/// Detectability of attack-generated fake feature rows.
///
/// A fresh evaluation discriminator is trained to separate the real feature
/// rows from randomly generated rows of matching density, then scored on
/// the attack's fake rows. Since every evaluated row is truly fake, the
/// fake-class F1 reduces to `2r / (1 + r)` for recall `r`; lower values
/// mean the fakes are harder to detect.
pub fn detectability_f1(
    x_fake: &ArrayView2<f64>,
    x_real: &ArrayView2<f64>,
    seed: u64,
) -> Result<f64> {
    if x_fake.nrows() == 0 {
        return Err(Error::Config("no fake rows to evaluate".into()));
    }
    if x_fake.ncols() != x_real.ncols() {
        return Err(Error::Structure(format!(
            "fake rows have {} features but real rows have {}",
            x_fake.ncols(),
            x_real.ncols()
        )));
    }
    let n = x_real.nrows();
    let d = x_real.ncols();
    let ones = x_real.iter().filter(|&&v| v != 0.0).count();
    let density = if n * d == 0 {
        0.0
    } else {
        ones as f64 / (n * d) as f64
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut train_x = Array2::zeros((2 * n, d));
    train_x.slice_mut(s![..n, ..]).assign(x_real);
    for i in n..2 * n {
        for j in 0..d {
            if rng.random::<f64>() < density {
                train_x[[i, j]] = 1.0;
            }
        }
    }
    let labels: Vec<bool> = (0..2 * n).map(|i| i >= n).collect();

    let disc = Discriminator::init(d, 32, seed)?;
    let disc = train_discriminator(disc, &train_x.view(), &labels, 300, 0.5)?;

    let p_fake = disc.prob_fake(x_fake);
    let predicted_fake = p_fake.iter().filter(|&&p| p > 0.5).count();
    if predicted_fake == 0 {
        return Ok(0.0);
    }
    let recall = predicted_fake as f64 / x_fake.nrows() as f64;
    Ok(2.0 * recall / (1.0 + recall))
}
