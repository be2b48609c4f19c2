use super::Partition;

/// Number of set partitions of an `n`-element set.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().expect("non-empty")];
        for v in &row {
            next.push(next.last().expect("non-empty") + v);
        }
        row = next;
    }
    row[0]
}

/// All set partitions of `{0,…,n-1}` as restricted growth strings, in
/// lexicographic order (all-in-one first, all-singletons last).
#[derive(Clone, Debug)]
pub struct SetPartitions {
    labels: Vec<u32>,
    maxes: Vec<u32>,
    done: bool,
}

pub fn set_partitions(n: usize) -> SetPartitions {
    SetPartitions {
        labels: vec![0; n],
        maxes: vec![0; n],
        done: false,
    }
}

impl Iterator for SetPartitions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let out = self.labels.clone();
        // maxes[i] = max(labels[..i]); position i may grow to maxes[i] + 1.
        let n = self.labels.len();
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.labels[i] <= self.maxes[i] {
                self.labels[i] += 1;
                for j in i + 1..n {
                    self.labels[j] = 0;
                    self.maxes[j] = self.maxes[j - 1].max(self.labels[j - 1]);
                }
                break;
            }
        }
        Some(out)
    }
}

/// Every partition strictly finer than `partition`: each block is split
/// independently, and at least one block is split.
pub fn weakenings(partition: &Partition) -> impl Iterator<Item = Partition> + '_ {
    let blocks: Vec<Vec<usize>> = partition.blocks().into_iter().filter(|b| b.len() > 1).collect();
    let choices: Vec<Vec<Vec<u32>>> = blocks.iter().map(|b| set_partitions(b.len()).collect()).collect();
    let total: usize = choices.iter().map(Vec::len).product();
    let n = partition.labels().len();
    (1..total).map(move |mut code| {
        let mut raw: Vec<u32> = partition.labels().iter().map(|l| *l * n as u32).collect();
        for (block, opts) in blocks.iter().zip(&choices) {
            let pick = &opts[code % opts.len()];
            code /= opts.len();
            for (member, sub) in block.iter().zip(pick) {
                raw[*member] += sub;
            }
        }
        Partition::from_labels(partition.universe().clone(), &raw)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{parse_system, partition_closure, TermUniverse};

    #[test]
    fn bell_numbers() {
        let expected = [1, 1, 2, 5, 15, 52, 203, 877, 4140];
        for (n, b) in expected.iter().enumerate() {
            assert_eq!(bell(n), *b);
            assert_eq!(set_partitions(n).count() as u64, *b);
        }
    }

    #[test]
    fn set_partitions_are_restricted_growth_strings() {
        let all: Vec<Vec<u32>> = set_partitions(4).collect();
        assert_eq!(all.first().unwrap(), &vec![0, 0, 0, 0]);
        assert_eq!(all.last().unwrap(), &vec![0, 1, 2, 3]);
        for rgs in &all {
            let mut max = 0;
            for (i, l) in rgs.iter().enumerate() {
                assert!(i == 0 && *l == 0 || *l <= max + 1);
                max = max.max(*l);
            }
        }
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, all);
    }

    #[test]
    fn weakening_counts() {
        let s = parse_system("x=p(x,x,y)=p(x,y,y)=p(x,y,x)=q(x,x,y)=q(x,y,x)=q(y,x,x)")
            .unwrap()
            .system;
        let u = TermUniverse::for_system(&s);
        let p = partition_closure(&s, &u).unwrap();
        let ws: Vec<Partition> = weakenings(&p).collect();
        assert_eq!(ws.len(), 876);
        assert!(ws.iter().all(|w| w.strictly_refines(&p)));

        let four = parse_system("p(x,x,y)=p(x,y,y); p(x,y,x)=q(x,x,y)=q(x,y,x)=q(y,x,x)")
            .unwrap()
            .system;
        let p = partition_closure(&four, &u).unwrap();
        assert_eq!(weakenings(&p).count(), 2 * 15 - 1);

        let pair = parse_system("x=p(x,x,y)").unwrap().system;
        let p = partition_closure(&pair, &TermUniverse::for_system(&pair)).unwrap();
        assert_eq!(weakenings(&p).count(), 1);

        let empty = Partition::singletons(u);
        assert_eq!(weakenings(&empty).count(), 0);
    }
}
