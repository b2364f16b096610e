use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use percent_encoding::{utf8_percent_encode, AsciiSet, CONTROLS};

use super::record::{parse_record, CrossrefRecord};
use super::IngestError;
use crate::doi::normalize_doi;

const PATH_UNSAFE: &AsciiSet = &CONTROLS
    .add(b' ')
    .add(b'"')
    .add(b'#')
    .add(b'%')
    .add(b'<')
    .add(b'>')
    .add(b'?')
    .add(b'`')
    .add(b'{')
    .add(b'}');

#[derive(Debug, Clone)]
pub struct HttpResponse {
    pub status: u16,
    pub body: Vec<u8>,
}

/// Minimal blocking GET used by the registry client. Tests plug in a mock.
pub trait Transport: Send + Sync {
    fn get(&self, url: &str, headers: &[(String, String)]) -> Result<HttpResponse, String>;
}

#[derive(Debug, Clone)]
pub struct EndpointConfig {
    pub api_base: String,
    /// Contact address sent in the User-Agent (`mailto:`).
    pub contact: Option<String>,
    /// Minimum spacing between consecutive requests.
    pub politeness: Duration,
    /// Retries after the first attempt, for 429, 5xx and transport failures.
    pub max_retries: u32,
    /// First retry delay; doubles on each further retry.
    pub backoff: Duration,
}

impl Default for EndpointConfig {
    fn default() -> Self {
        EndpointConfig {
            api_base: "https://api.crossref.org".into(),
            contact: None,
            politeness: Duration::from_secs(1),
            max_retries: 3,
            backoff: Duration::from_secs(2),
        }
    }
}

impl EndpointConfig {
    pub fn user_agent(&self) -> String {
        match &self.contact {
            Some(c) => format!("sneakref/{} (mailto:{c})", env!("CARGO_PKG_VERSION")),
            None => format!("sneakref/{}", env!("CARGO_PKG_VERSION")),
        }
    }
}

pub struct CrossrefClient<T> {
    transport: T,
    config: EndpointConfig,
    last_request: Mutex<Option<Instant>>,
}

impl<T: Transport> CrossrefClient<T> {
    pub fn new(transport: T, config: EndpointConfig) -> Self {
        CrossrefClient {
            transport,
            config,
            last_request: Mutex::new(None),
        }
    }

    pub fn transport(&self) -> &T {
        &self.transport
    }

    pub fn fetch_record(&self, doi: &str) -> Result<CrossrefRecord, IngestError> {
        let body = self.fetch_raw(doi)?;
        parse_record(&body)
    }

    /// Response body of `GET {api_base}/works/{doi}`.
    pub fn fetch_raw(&self, doi: &str) -> Result<Vec<u8>, IngestError> {
        let doi = normalize_doi(doi).ok_or_else(|| IngestError::InvalidDoi(doi.to_string()))?;
        let url = format!(
            "{}/works/{}",
            self.config.api_base.trim_end_matches('/'),
            utf8_percent_encode(&doi, PATH_UNSAFE)
        );
        let headers = vec![("User-Agent".to_string(), self.config.user_agent())];

        let mut attempt = 0u32;
        loop {
            self.wait_politely();
            let failure = match self.transport.get(&url, &headers) {
                Ok(resp) if (200..300).contains(&resp.status) => return Ok(resp.body),
                Ok(resp) if resp.status == 404 => return Err(IngestError::NotRegistered { doi }),
                Ok(resp) if resp.status == 429 || resp.status >= 500 => format!("HTTP {}", resp.status),
                Ok(resp) => {
                    return Err(IngestError::Transport {
                        doi,
                        message: format!("HTTP {}", resp.status),
                    })
                }
                Err(e) => e,
            };
            if attempt >= self.config.max_retries {
                return Err(IngestError::Transport { doi, message: failure });
            }
            let delay = self.config.backoff * 2u32.saturating_pow(attempt);
            log::debug!("{doi}: {failure}, retrying in {delay:?}");
            if !delay.is_zero() {
                thread::sleep(delay);
            }
            attempt += 1;
        }
    }

    fn wait_politely(&self) {
        let mut last = self.last_request.lock().expect("politeness lock");
        if let Some(prev) = *last {
            let elapsed = prev.elapsed();
            if elapsed < self.config.politeness {
                thread::sleep(self.config.politeness - elapsed);
            }
        }
        *last = Some(Instant::now());
    }
}

#[cfg(feature = "http")]
pub use reqwest_transport::ReqwestTransport;

#[cfg(feature = "http")]
mod reqwest_transport {
    use super::{HttpResponse, Transport};
    use std::time::Duration;

    pub struct ReqwestTransport {
        client: reqwest::blocking::Client,
    }

    impl ReqwestTransport {
        pub fn new(timeout: Duration) -> Result<Self, String> {
            let client = reqwest::blocking::Client::builder()
                .timeout(timeout)
                .build()
                .map_err(|e| e.to_string())?;
            Ok(ReqwestTransport { client })
        }
    }

    impl Transport for ReqwestTransport {
        fn get(&self, url: &str, headers: &[(String, String)]) -> Result<HttpResponse, String> {
            let mut req = self.client.get(url);
            for (k, v) in headers {
                req = req.header(k.as_str(), v.as_str());
            }
            let resp = req.send().map_err(|e| e.to_string())?;
            let status = resp.status().as_u16();
            let body = resp.bytes().map_err(|e| e.to_string())?.to_vec();
            Ok(HttpResponse { status, body })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::atomic::{AtomicUsize, Ordering};

    struct Scripted {
        responses: Mutex<Vec<HttpResponse>>,
        calls: AtomicUsize,
        urls: Mutex<Vec<String>>,
    }

    impl Scripted {
        fn new(mut responses: Vec<HttpResponse>) -> Self {
            responses.reverse();
            Scripted {
                responses: Mutex::new(responses),
                calls: AtomicUsize::new(0),
                urls: Mutex::new(Vec::new()),
            }
        }
    }

    impl Transport for Scripted {
        fn get(&self, url: &str, _headers: &[(String, String)]) -> Result<HttpResponse, String> {
            self.calls.fetch_add(1, Ordering::SeqCst);
            self.urls.lock().unwrap().push(url.to_string());
            self.responses.lock().unwrap().pop().ok_or_else(|| "no more responses".to_string())
        }
    }

    fn fast_config() -> EndpointConfig {
        EndpointConfig {
            api_base: "http://mock".into(),
            contact: Some("ops@example.org".into()),
            politeness: Duration::ZERO,
            max_retries: 3,
            backoff: Duration::ZERO,
        }
    }

    fn ok(body: &str) -> HttpResponse {
        HttpResponse { status: 200, body: body.as_bytes().to_vec() }
    }

    const BODY: &str = r#"{"status":"ok","message":{"DOI":"10.38124/ijisrt/a","reference":[{"key":"1","DOI":"10.1/x"}]}}"#;

    #[test]
    fn happy_path_parses_record() {
        let client = CrossrefClient::new(Scripted::new(vec![ok(BODY)]), fast_config());
        let rec = client.fetch_record("10.38124/IJISRT/A").unwrap();
        assert_eq!(rec.references.len(), 1);
        assert_eq!(client.transport().urls.lock().unwrap()[0], "http://mock/works/10.38124/ijisrt/a");
    }

    #[test]
    fn not_found_maps_to_not_registered() {
        let resp = HttpResponse { status: 404, body: b"Resource not found.".to_vec() };
        let client = CrossrefClient::new(Scripted::new(vec![resp]), fast_config());
        match client.fetch_record("10.1/missing") {
            Err(IngestError::NotRegistered { doi }) => assert_eq!(doi, "10.1/missing"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rate_limited_then_ok_takes_two_requests() {
        let limited = HttpResponse { status: 429, body: Vec::new() };
        let client = CrossrefClient::new(Scripted::new(vec![limited, ok(BODY)]), fast_config());
        client.fetch_record("10.38124/ijisrt/a").unwrap();
        assert_eq!(client.transport().calls.load(Ordering::SeqCst), 2);
    }

    #[test]
    fn retry_budget_exhaustion_is_transport_error() {
        let e = || HttpResponse { status: 503, body: Vec::new() };
        let client = CrossrefClient::new(Scripted::new(vec![e(), e(), e(), e()]), fast_config());
        match client.fetch_record("10.1/a") {
            Err(IngestError::Transport { doi, .. }) => assert_eq!(doi, "10.1/a"),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(client.transport().calls.load(Ordering::SeqCst), 4);
    }

    #[test]
    fn client_error_is_not_retried() {
        let resp = HttpResponse { status: 400, body: Vec::new() };
        let client = CrossrefClient::new(Scripted::new(vec![resp]), fast_config());
        assert!(matches!(client.fetch_record("10.1/a"), Err(IngestError::Transport { .. })));
        assert_eq!(client.transport().calls.load(Ordering::SeqCst), 1);
    }

    #[test]
    fn user_agent_carries_contact() {
        assert!(fast_config().user_agent().ends_with("(mailto:ops@example.org)"));
    }
}
