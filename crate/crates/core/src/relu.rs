//! Compilation of linear combinations of maxima into ReLU networks.
//!
//! Every maximum of `k` affine functions becomes a balanced tree of
//! `max(a, b) = a + relu(b - a)` of depth `⌈log₂ k⌉`. A value that has to
//! survive a layer untouched is sent through the pair `relu(v), relu(-v)`.
//! The last layer is linear and combines the terms with their coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pwl::{AffineFunc, LinComb, Pwl};
use crate::rational::{serde_str, to_f64, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    Linear,
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Activation::Relu => "relu",
            Activation::Linear => "linear",
        })
    }
}

/// One fully connected layer: row `i` of `weights` and `bias[i]` define
/// neuron `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layer {
    #[serde(with = "serde_str::matrix")]
    pub weights: Vec<Vec<Rational>>,
    #[serde(with = "serde_str::vec")]
    pub bias: Vec<Rational>,
    pub activation: Activation,
}

impl Layer {
    pub fn width(&self) -> usize {
        self.bias.len()
    }

    fn forward(&self, x: &[Rational]) -> Vec<Rational> {
        self.weights
            .iter()
            .zip(&self.bias)
            .map(|(row, b)| {
                let v = row.iter().zip(x).fold(b.clone(), |acc, (w, xi)| acc + w * xi);
                match self.activation {
                    Activation::Relu if v.is_negative() => Rational::zero(),
                    _ => v,
                }
            })
            .collect()
    }
}

/// A feed-forward network with a single output; every layer but the last
/// applies ReLU.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReluNetwork {
    n_in: usize,
    layers: Vec<Layer>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NetworkStats {
    /// Number of layers, the output layer included.
    pub depth: usize,
    pub relu_layers: usize,
    /// Widest hidden layer (1 for a network without hidden layers).
    pub max_width: usize,
    pub hidden_neurons: usize,
}

impl fmt::Display for NetworkStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "depth {}, relu layers {}, max width {}, hidden neurons {}",
            self.depth, self.relu_layers, self.max_width, self.hidden_neurons
        )
    }
}

impl ReluNetwork {
    pub fn new(n_in: usize, layers: Vec<Layer>) -> Result<ReluNetwork> {
        let Some(last) = layers.last() else {
            return Err(Error::ShapeMismatch("network has no layers".into()));
        };
        if last.activation != Activation::Linear || last.width() != 1 {
            return Err(Error::ShapeMismatch("last layer must be a single linear neuron".into()));
        }
        let mut prev = n_in;
        for (i, layer) in layers.iter().enumerate() {
            if i + 1 < layers.len() && layer.activation != Activation::Relu {
                return Err(Error::ShapeMismatch(format!("layer {i} must be relu")));
            }
            if layer.weights.len() != layer.bias.len() {
                return Err(Error::ShapeMismatch(format!(
                    "layer {i}: {} weight rows but {} biases",
                    layer.weights.len(),
                    layer.bias.len()
                )));
            }
            if let Some(row) = layer.weights.iter().find(|row| row.len() != prev) {
                return Err(Error::ShapeMismatch(format!(
                    "layer {i}: row of length {} after a layer of width {prev}",
                    row.len()
                )));
            }
            prev = layer.width();
        }
        Ok(ReluNetwork { n_in, layers })
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.n_in {
            return Err(Error::DimensionMismatch {
                expected: self.n_in,
                found: x.len(),
            });
        }
        let out = self.layers.iter().fold(x.to_vec(), |acc, layer| layer.forward(&acc));
        Ok(out.into_iter().next().expect("single output"))
    }

    pub fn stats(&self) -> NetworkStats {
        let hidden = &self.layers[..self.layers.len() - 1];
        NetworkStats {
            depth: self.layers.len(),
            relu_layers: hidden.len(),
            max_width: hidden.iter().map(Layer::width).max().unwrap_or(1),
            hidden_neurons: hidden.iter().map(Layer::width).sum(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("network serializes")
    }

    /// Same shape as [`to_json`](Self::to_json) with every entry rounded to
    /// the nearest double. Evaluating the rounded network is only accurate
    /// up to floating point error; compare against exact values with a
    /// tolerance such as `1e-9`.
    pub fn to_json_floats(&self) -> String {
        let layers: Vec<_> = self
            .layers
            .iter()
            .map(|l| {
                serde_json::json!({
                    "weights": l.weights.iter()
                        .map(|row| row.iter().map(to_f64).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                    "bias": l.bias.iter().map(to_f64).collect::<Vec<_>>(),
                    "activation": l.activation,
                })
            })
            .collect();
        let v = serde_json::json!({ "n_in": self.n_in, "layers": layers });
        serde_json::to_string_pretty(&v).expect("network serializes")
    }

    pub fn from_json(text: &str) -> Result<ReluNetwork> {
        #[derive(Deserialize)]
        struct Raw {
            n_in: usize,
            layers: Vec<Layer>,
        }
        let raw: Raw = serde_json::from_str(text)?;
        ReluNetwork::new(raw.n_in, raw.layers)
    }
}

impl Pwl for ReluNetwork {
    fn dim(&self) -> usize {
        self.n_in
    }

    fn eval_at(&self, x: &[Rational]) -> Result<Rational> {
        self.eval(x)
    }
}

pub fn eval_network(net: &ReluNetwork, x: &[Rational]) -> Result<Rational> {
    net.eval(x)
}

/// Affine form over the outputs of the previous layer, sparse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Form {
    coeffs: BTreeMap<usize, Rational>,
    constant: Rational,
}

impl Form {
    fn constant(c: Rational) -> Form {
        Form {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    fn from_affine(g: &AffineFunc) -> Form {
        Form {
            coeffs: g
                .gradient()
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(i, v)| (i, v.clone()))
                .collect(),
            constant: g.constant().clone(),
        }
    }

    fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_scaled(&mut self, other: &Form, factor: &Rational) {
        for (i, v) in &other.coeffs {
            let e = self.coeffs.entry(*i).or_insert_with(Rational::zero);
            *e += v * factor;
            if e.is_zero() {
                self.coeffs.remove(i);
            }
        }
        self.constant += &other.constant * factor;
    }

    fn scaled(&self, factor: &Rational) -> Form {
        let mut f = Form::constant(Rational::zero());
        f.add_scaled(self, factor);
        f
    }

    fn dense(&self, width: usize) -> Vec<Rational> {
        let mut row = vec![Rational::zero(); width];
        for (i, v) in &self.coeffs {
            row[*i] = v.clone();
        }
        row
    }
}

/// Collects the neurons of one hidden layer, sharing identical ones.
#[derive(Default)]
struct LayerBuilder {
    neurons: Vec<Form>,
    index: HashMap<Form, usize>,
}

impl LayerBuilder {
    /// `relu(pre)` as a form over this layer's outputs.
    fn relu(&mut self, pre: Form) -> Form {
        if pre.is_constant() {
            let c = if pre.constant.is_negative() {
                Rational::zero()
            } else {
                pre.constant
            };
            return Form::constant(c);
        }
        let next = self.neurons.len();
        let i = *self.index.entry(pre.clone()).or_insert(next);
        if i == next {
            self.neurons.push(pre);
        }
        let mut f = Form::constant(Rational::zero());
        f.coeffs.insert(i, Rational::one());
        f
    }

    /// `v = relu(v) - relu(-v)`.
    fn carry(&mut self, v: &Form) -> Form {
        if v.is_constant() {
            return v.clone();
        }
        let mut f = self.relu(v.clone());
        let neg = self.relu(v.scaled(&-Rational::one()));
        f.add_scaled(&neg, &-Rational::one());
        f
    }

    /// `max(u, v) = u + relu(v - u)`, carrying a constant argument if any.
    fn max(&mut self, u: &Form, v: &Form) -> Form {
        let (u, v) = if v.is_constant() && !u.is_constant() {
            (v, u)
        } else {
            (u, v)
        };
        let mut diff = v.clone();
        diff.add_scaled(u, &-Rational::one());
        let mut f = self.carry(u);
        let r = self.relu(diff);
        f.add_scaled(&r, &Rational::one());
        f
    }

    fn finish(self, prev_width: usize) -> Layer {
        Layer {
            weights: self.neurons.iter().map(|f| f.dense(prev_width)).collect(),
            bias: self.neurons.iter().map(|f| f.constant.clone()).collect(),
            activation: Activation::Relu,
        }
    }
}

/// Number of ReLU layers needed for a maximum of `k` arguments.
pub fn relu_depth(k: usize) -> usize {
    if k <= 1 {
        0
    } else {
        (k - 1).ilog2() as usize + 1
    }
}

/// Builds a network computing `c`. Affine terms are folded into the output
/// layer and carried through the hidden layers as a single value.
pub fn emit(c: &LinComb) -> ReluNetwork {
    let n = c.dim();
    let c = c.canonicalize();
    let mut linear = AffineFunc::zero(n);
    // Per multi-argument term: its coefficient and the current tree level.
    let mut items: Vec<(Rational, Vec<Form>)> = Vec::new();
    for (coeff, t) in c.terms() {
        if let [g] = t.constituents() {
            linear = &linear + &g.scale(coeff);
        } else {
            items.push((coeff.clone(), t.constituents().iter().map(Form::from_affine).collect()));
        }
    }
    let depth = items.iter().map(|(_, v)| relu_depth(v.len())).max().unwrap_or(0);
    let mut lin = Form::from_affine(&linear);
    let mut layers = Vec::with_capacity(depth + 1);
    let mut width = n;
    for _ in 0..depth {
        let mut b = LayerBuilder::default();
        for (_, vals) in &mut items {
            *vals = vals
                .chunks(2)
                .map(|pair| match pair {
                    [u, v] => b.max(u, v),
                    [u] => b.carry(u),
                    _ => unreachable!(),
                })
                .collect();
        }
        lin = b.carry(&lin);
        let layer = b.finish(width);
        width = layer.width();
        layers.push(layer);
    }
    let mut out = lin;
    for (coeff, vals) in &items {
        out.add_scaled(&vals[0], coeff);
    }
    layers.push(Layer {
        weights: vec![out.dense(width)],
        bias: vec![out.constant],
        activation: Activation::Linear,
    });
    ReluNetwork { n_in: n, layers }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_lincomb;
    use crate::rational::{int, rat};

    const THREE_RELUS: &str = "4*max(-x1 + 3*x2 + 2, 0) - 5*max(2*x1 - 3, 0) + 6*max(5*x2 + 1, 0) + 8";

    fn lc(text: &str, n: usize) -> LinComb {
        parse_lincomb(text, n).unwrap()
    }

    fn grid(n: usize) -> Vec<Vec<Rational>> {
        let axis: Vec<Rational> = (-3..=3).map(|i| rat(i, 2)).collect();
        let mut pts = vec![vec![]];
        for _ in 0..n {
            pts = pts
                .into_iter()
                .flat_map(|p| axis.iter().map(move |a| [p.clone(), vec![a.clone()]].concat()))
                .collect();
        }
        pts
    }

    fn assert_exact(c: &LinComb) -> ReluNetwork {
        let net = emit(c);
        for x in grid(c.dim()) {
            assert_eq!(net.eval(&x).unwrap(), c.eval(&x).unwrap(), "at {x:?}");
        }
        net
    }

    #[test]
    fn three_relu_network() {
        let net = assert_exact(&lc(THREE_RELUS, 2));
        assert_eq!(net.eval(&[int(0), int(0)]).unwrap(), int(22));
        let s = net.stats();
        assert_eq!((s.depth, s.relu_layers, s.max_width), (2, 1, 3));
    }

    #[test]
    fn affine_only_network_is_one_linear_layer() {
        let net = assert_exact(&lc("3*x1 - x2 + 5", 2));
        assert_eq!(net.stats().depth, 1);
        assert_eq!(net.layers()[0].activation, Activation::Linear);
    }

    #[test]
    fn three_argument_max_uses_two_relu_layers() {
        let net = assert_exact(&lc("max(0, x1, x2)", 2));
        assert_eq!(net.stats().depth, 3);
    }

    #[test]
    fn affine_parts_are_carried() {
        let c = lc("x1 - 2*x2 + max(x1, x2, 3) - 1/3*max(x1 + x2, 0, x2 - 1, 2*x1, 5)", 2);
        let net = assert_exact(&c);
        assert_eq!(net.stats().relu_layers, 3);
    }

    #[test]
    fn depth_of_balanced_tree() {
        let d: Vec<usize> = (1..=9).map(relu_depth).collect();
        assert_eq!(d, [0, 1, 2, 2, 3, 3, 3, 3, 4]);
    }

    #[test]
    fn json_round_trip() {
        let net = emit(&lc(THREE_RELUS, 2));
        let text = net.to_json();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["n_in"], 2);
        assert_eq!(v["layers"][0]["activation"], "relu");
        assert_eq!(v["layers"][1]["bias"][0], "8");
        assert_eq!(ReluNetwork::from_json(&text).unwrap(), net);
        let floats: serde_json::Value = serde_json::from_str(&net.to_json_floats()).unwrap();
        assert_eq!(floats["layers"][1]["bias"][0], 8.0);
    }

    #[test]
    fn shape_errors() {
        let bad = r#"{"n_in": 2, "layers": [{"weights": [["1"]], "bias": ["0"], "activation": "linear"}]}"#;
        assert!(matches!(ReluNetwork::from_json(bad), Err(Error::ShapeMismatch(_))));
        let net = emit(&lc("max(x1, 0)", 1));
        assert!(matches!(
            net.eval(&[int(1), int(2)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
