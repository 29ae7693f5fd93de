import { ApiClient } from './api';
import { apiBaseUrl, App } from './app';

document.addEventListener('DOMContentLoaded', () => {
  const root = document.getElementById('app');
  if (!root) throw new Error('missing #app element');
  const app = new App(root, new ApiClient(apiBaseUrl()));
  void app.init();
});
