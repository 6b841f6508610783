public void renderPage(String title, String header, String footer, String body, String style, int width, int height) {
    draw(title, header);
    draw(footer, body);
    resize(style, width, height);
}
