use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

/// Callback events raised at the end of an epoch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrainEvent {
    Best,
    LrReduced,
    EarlyStopped,
}

impl fmt::Display for TrainEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrainEvent::Best => "best",
            TrainEvent::LrReduced => "lr-reduced",
            TrainEvent::EarlyStopped => "early-stopped",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    /// 1-based.
    pub epoch: usize,
    pub train_loss: f64,
    pub val_loss: f64,
    /// Learning rate used during this epoch.
    pub lr: f64,
    pub events: Vec<TrainEvent>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainHistory {
    pub epochs: Vec<EpochRecord>,
    pub stopped_early: bool,
}

impl TrainHistory {
    pub fn len(&self) -> usize {
        self.epochs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.epochs.is_empty()
    }

    /// Epoch with the lowest validation loss; the earliest wins ties.
    pub fn best(&self) -> Option<&EpochRecord> {
        self.epochs
            .iter()
            .reduce(|best, e| if e.val_loss < best.val_loss { e } else { best })
    }

    pub fn best_val_loss(&self) -> Option<f64> {
        self.best().map(|e| e.val_loss)
    }

    /// `epoch,train_loss,val_loss,lr,event`; several events join with `;`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "epoch,train_loss,val_loss,lr,event")?;
        for e in &self.epochs {
            let events: Vec<String> = e.events.iter().map(ToString::to_string).collect();
            writeln!(
                w,
                "{},{:?},{:?},{:?},{}",
                e.epoch,
                e.train_loss,
                e.val_loss,
                e.lr,
                events.join(";")
            )?;
        }
        Ok(())
    }
}
