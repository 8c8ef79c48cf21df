use std::sync::Arc;

use patternc_cli::{server, Service};
use tokio::io::{AsyncReadExt, AsyncWriteExt};
use tokio::net::{TcpListener, TcpStream};

async fn request(addr: std::net::SocketAddr, method: &str, path: &str, body: &str) -> (u16, String) {
    let mut s = TcpStream::connect(addr).await.unwrap();
    let req = format!(
        "{method} {path} HTTP/1.1\r\nHost: localhost\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
        body.len()
    );
    s.write_all(req.as_bytes()).await.unwrap();
    let mut buf = String::new();
    s.read_to_string(&mut buf).await.unwrap();
    let status = buf.split_whitespace().nth(1).unwrap().parse().unwrap();
    let body = buf.split_once("\r\n\r\n").map(|(_, b)| b.to_string()).unwrap_or_default();
    (status, body)
}

#[tokio::test(flavor = "multi_thread")]
async fn serves_the_api_over_http() {
    let listener = TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(server::serve(listener, Arc::new(Service::default())));

    let pants = std::fs::read_to_string(format!("{}/../core/tests/fixtures/pants_listing.json", env!("CARGO_MANIFEST_DIR"))).unwrap();
    let (status, body) = request(addr, "POST", "/compile", &pants).await;
    assert_eq!(status, 200);
    assert!(body.contains("\"pattern\""));
    let direct = Service::default().handle_request("POST", "/compile", pants.as_bytes());
    assert!(body.contains(direct.text().trim()));

    assert_eq!(request(addr, "GET", "/schema", "").await.0, 200);
    assert_eq!(request(addr, "POST", "/validate", "{").await.0, 400);
    assert_eq!(request(addr, "GET", "/elsewhere", "").await.0, 404);
}
