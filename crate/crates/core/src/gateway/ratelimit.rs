use std::collections::VecDeque;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

pub trait Clock: Send + Sync {
    /// Time since an arbitrary fixed origin.
    fn now(&self) -> Duration;
    fn sleep(&self, d: Duration);
}

#[derive(Debug)]
pub struct SystemClock {
    origin: Instant,
}

impl Default for SystemClock {
    fn default() -> Self {
        SystemClock { origin: Instant::now() }
    }
}

impl Clock for SystemClock {
    fn now(&self) -> Duration {
        self.origin.elapsed()
    }

    fn sleep(&self, d: Duration) {
        std::thread::sleep(d);
    }
}

/// Manual clock: `sleep` advances time instantly.
#[derive(Debug, Default)]
pub struct FakeClock {
    nanos: AtomicU64,
}

impl FakeClock {
    pub fn advance(&self, d: Duration) {
        self.nanos.fetch_add(d.as_nanos() as u64, Ordering::SeqCst);
    }
}

impl Clock for FakeClock {
    fn now(&self) -> Duration {
        Duration::from_nanos(self.nanos.load(Ordering::SeqCst))
    }

    fn sleep(&self, d: Duration) {
        self.advance(d);
    }
}

/// Sliding-window limiter: at most `limit` permits in any `window`.
pub struct RateLimiter {
    limit: usize,
    window: Duration,
    issued: Mutex<VecDeque<Duration>>,
    clock: Arc<dyn Clock>,
}

impl RateLimiter {
    pub fn per_minute(limit: u32, clock: Arc<dyn Clock>) -> Self {
        RateLimiter { limit: limit as usize, window: Duration::from_secs(60), issued: Mutex::new(VecDeque::new()), clock }
    }

    /// Blocks until a permit is available; returns the issue time.
    pub fn acquire(&self) -> Duration {
        loop {
            let now = self.clock.now();
            let wait = {
                let mut issued = self.issued.lock().unwrap_or_else(|e| e.into_inner());
                if self.limit == 0 {
                    return now;
                }
                while issued.front().is_some_and(|&t| t + self.window <= now) {
                    issued.pop_front();
                }
                if issued.len() < self.limit {
                    issued.push_back(now);
                    return now;
                }
                issued.front().map_or(Duration::ZERO, |&t| t + self.window - now)
            };
            self.clock.sleep(wait.max(Duration::from_millis(1)));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_never_exceeds_limit() {
        let clock = Arc::new(FakeClock::default());
        let limiter = RateLimiter::per_minute(10, clock.clone());
        let mut times = Vec::new();
        for i in 0..35 {
            if i % 3 == 0 {
                clock.advance(Duration::from_secs(2));
            }
            times.push(limiter.acquire());
        }
        for (i, &t) in times.iter().enumerate() {
            let in_window = times[i..].iter().filter(|&&u| u < t + Duration::from_secs(60)).count();
            assert!(in_window <= 10, "{in_window} permits in the window starting at {t:?}");
        }
        // the 11th permit waits for the first to leave the window
        assert!(times[10] >= times[0] + Duration::from_secs(60));
    }

    #[test]
    fn zero_means_unlimited() {
        let clock = Arc::new(FakeClock::default());
        let limiter = RateLimiter::per_minute(0, clock.clone());
        for _ in 0..100 {
            limiter.acquire();
        }
        assert_eq!(clock.now(), Duration::ZERO);
    }
}
