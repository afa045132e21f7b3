import { makeClient } from "./api";
import { App } from "./app";
import "./styles.css";

const root = document.getElementById("app");
if (root) {
  const app = new App(root, makeClient((url) => window.fetch(url)), window);
  void app.start();
}
