//! On-disk proof format: the proof together with the signature it was
//! built against, so that a file can be checked or transformed on its own.

use serde::{Deserialize, Serialize};

use super::Proof;
use crate::syntax::Signature;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProofDocument {
    pub signature: Signature,
    pub proof: Proof,
}

impl ProofDocument {
    pub fn new(signature: Signature, proof: Proof) -> Self {
        ProofDocument { signature, proof }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("proof documents always serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{Multiset, Sequent};
    use crate::syntax::{Formula, Literal, Polarity};

    #[test]
    fn round_trip() {
        let sig = Signature::new().with_predicate("p", 0, Polarity::Positive);
        let p = Formula::atom("p", vec![]);
        let leaf = Proof::init(Multiset::new().with(p.clone()), Literal::atom("p", vec![]));
        let doc = ProofDocument::new(sig.clone(), leaf);
        let back = ProofDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back.signature, sig);
        assert_eq!(back.proof, doc.proof);
        assert_eq!(back.proof.conclusion, Sequent::focused(Multiset::new().with(p.clone()), p));
    }
}
